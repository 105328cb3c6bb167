use super::series::{SeriesControl, SeriesSum};
use crate::error::{domain, Error, Result};

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: f64, n: u32) -> f64 {
    let mut p = 1.0;
    for i in 0..n {
        p *= x + i as f64;
    }
    p
}

fn nonpositive_integer(x: f64) -> Option<u64> {
    (x <= 0.0 && x == x.round() && x > -1e15).then(|| (-x) as u64)
}

/// Gauss hypergeometric function `2F1(a, b; c; z)`.
///
/// Terminating cases (`a` or `b` a nonpositive integer) are evaluated as
/// exact finite sums for any real `z`; the routine picks among the direct
/// sum and its Pfaff and Euler transforms the representation with the least
/// cancellation. Otherwise the defining series is summed for `|z| < 1`.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    const OP: &str = "hyp2f1";
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(domain(OP, "non-finite argument"));
    }
    let m = match (nonpositive_integer(a), nonpositive_integer(b)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    if let Some(cn) = nonpositive_integer(c) {
        if m.is_none_or(|m| cn < m) {
            return Err(domain(OP, format!("c = {c} is a pole")));
        }
    }
    if let Some(m) = m {
        let (a, b) = if nonpositive_integer(a) == Some(m) {
            (a, b)
        } else {
            (b, a)
        };
        return Ok(terminating(a, b, c, z, m).0);
    }
    if z.abs() >= 1.0 {
        return Err(domain(
            OP,
            format!("|z| = {} >= 1 for a non-terminating series", z.abs()),
        ));
    }
    let mut s = SeriesSum::new(ctl);
    let mut term = 1.0;
    let mut n = 0.0;
    loop {
        if s.add(term) {
            return Ok(s.value());
        }
        if s.exhausted() {
            return Err(Error::NonConvergence {
                op: OP,
                terms: s.terms(),
            });
        }
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        n += 1.0;
    }
}

/// Finite sum of `m + 1` terms; returns the value and the sum of moduli.
fn finite_sum(a: f64, b: f64, c: f64, z: f64, m: u64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut abs = 0.0;
    let mut term = 1.0f64;
    for n in 0..=m {
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        abs += term.abs();
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        if term == 0.0 {
            break;
        }
    }
    (sum + comp, abs)
}

/// Value and the sum of term moduli of the best-conditioned of the direct,
/// Pfaff and Euler forms.
fn terminating(a: f64, b: f64, c: f64, z: f64, m: u64) -> (f64, f64) {
    let cond = |(v, s): (f64, f64)| if v == 0.0 { f64::INFINITY } else { s / v.abs() };
    let direct = finite_sum(a, b, c, z, m);
    if cond(direct) <= 10.0 || z == 1.0 {
        return direct;
    }
    let mut best = (direct.0, cond(direct));
    let mut moduli = direct.1;
    let mf = m as f64;

    // Pfaff: (1-z)^m 2F1(-m, c-b; c; z/(z-1)).
    let w = z / (z - 1.0);
    let mp = nonpositive_integer(c - b).map_or(m, |k| k.min(m));
    let (v, s) = finite_sum(a, c - b, c, w, mp);
    let pre = (1.0 - z).powf(mf);
    let cand = (pre * v, cond((v, s)));
    if cand.1 < best.1 {
        best = cand;
        moduli = pre * s;
    }

    // Euler: (1-z)^(c-a-b) 2F1(c-a, c-b; c; z) when c-b terminates.
    if let Some(k) = nonpositive_integer(c - b) {
        let (v, s) = finite_sum(c - b, c - a, c, z, k);
        let expo = c - a - b;
        let pre = if z < 1.0 {
            (1.0 - z).powf(expo)
        } else {
            (1.0 - z).powi(expo as i32)
        };
        let cand = (pre * v, cond((v, s)));
        if cand.1 < best.1 {
            best = cand;
            moduli = pre.abs() * s;
        }
    }
    (best.0, moduli)
}

/// Terminating `2F1` with an estimate of its absolute rounding error, or
/// `None` when neither `a` nor `b` is a non-positive integer.
pub(crate) fn hyp2f1_terminating(a: f64, b: f64, c: f64, z: f64) -> Option<(f64, f64)> {
    let m = match (nonpositive_integer(a), nonpositive_integer(b)) {
        (Some(x), Some(y)) => x.min(y),
        (x, y) => x.or(y)?,
    };
    let (a, b) = if nonpositive_integer(a) == Some(m) {
        (a, b)
    } else {
        (b, a)
    };
    let (v, moduli) = terminating(a, b, c, z, m);
    Some((v, 4.0 * (m as f64 + 1.0) * f64::EPSILON * moduli))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(3.7, 0), 1.0);
        assert_relative_eq!(pochhammer(0.5, 4), 6.5625, max_relative = 1e-15);
        assert_eq!(pochhammer(1.0, 5), 120.0);
    }

    #[test]
    fn terminating_linear() {
        assert_relative_eq!(hyp2f1(-1.0, 2.5, 3.0, 0.4, ctl()).unwrap(), 1.0 - 2.5 * 0.4 / 3.0);
        assert_relative_eq!(hyp2f1(2.5, -1.0, 3.0, -7.0, ctl()).unwrap(), 1.0 + 2.5 * 7.0 / 3.0);
    }

    #[test]
    fn binomial_reduction() {
        let v = hyp2f1(1.3, 0.7, 0.7, 0.5, ctl()).unwrap();
        assert_relative_eq!(v, 0.5f64.powf(-1.3), max_relative = 1e-12);
    }

    #[test]
    fn log_identity() {
        // z 2F1(1,1;2;z) = -ln(1-z)
        let z = 0.6;
        let v = z * hyp2f1(1.0, 1.0, 2.0, z, ctl()).unwrap();
        assert_relative_eq!(v, -(1.0 - z).ln(), max_relative = 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(hyp2f1(0.5, 0.5, 1.0, 1.0, ctl()), Err(Error::Domain { .. })));
        assert!(matches!(hyp2f1(0.5, 0.5, -2.0, 0.1, ctl()), Err(Error::Domain { .. })));
        assert!(matches!(hyp2f1(-4.0, 0.5, -2.0, 0.1, ctl()), Err(Error::Domain { .. })));
        // A pole beyond the termination order is harmless.
        assert!(hyp2f1(-2.0, 0.5, -4.0, 0.1, ctl()).is_ok());
    }

    #[test]
    fn nonconvergence_reported() {
        let tight = SeriesControl::new(1e-15, 20, 3).unwrap();
        assert!(matches!(
            hyp2f1(1.0, 1.0, 2.0, 0.99, tight),
            Err(Error::NonConvergence { .. })
        ));
    }

    /// Exact value of 2F1(-l, k+1; 1; z) expanded in rationals.
    fn exact_terminating(l: u64, k: u64, z: num_rational::BigRational) -> f64 {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        use num_traits::{One, ToPrimitive};
        let mut sum = BigRational::from_integer(BigInt::from(0));
        let mut term = BigRational::one();
        for n in 0..=l {
            sum += term.clone();
            let nn = BigInt::from(n);
            let f = BigRational::new(
                (BigInt::from(n) - BigInt::from(l)) * (BigInt::from(k + 1) + &nn),
                (&nn + 1u32) * (&nn + 1u32),
            );
            term = term * f * z.clone();
        }
        sum.to_f64().unwrap()
    }

    #[test]
    fn cancellation_prone_terminating_sum() {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        // z = 4/5 makes the direct sum alternate with terms of size 2^l.
        let z = BigRational::new(BigInt::from(4), BigInt::from(5));
        for &(l, k) in &[(40u64, 0u64), (60, 2), (80, 5)] {
            let exact = exact_terminating(l, k, z.clone());
            let v = hyp2f1(-(l as f64), (k + 1) as f64, 1.0, 0.8, ctl()).unwrap();
            assert_relative_eq!(v, exact, max_relative = 1e-10);
        }
    }

    proptest! {
        #[test]
        fn gauss_contiguous_relation(a in 0.1f64..3.0, b in 0.1f64..3.0, c in 0.5f64..4.0, z in -0.8f64..0.8) {
            // c(c-1)(z-1) F(c-1) + c[c-1-(2c-a-b-1)z] F(c) + (c-a)(c-b) z F(c+1) = 0
            let f = |cc: f64| hyp2f1(a, b, cc, z, ctl()).unwrap();
            let t1 = c * (c - 1.0) * (z - 1.0) * f(c - 1.0);
            let t2 = c * (c - 1.0 - (2.0 * c - a - b - 1.0) * z) * f(c);
            let t3 = (c - a) * (c - b) * z * f(c + 1.0);
            let scale = t1.abs() + t2.abs() + t3.abs();
            prop_assume!(((c - 1.0).abs()) > 1e-3);
            prop_assert!((t1 + t2 + t3).abs() <= 1e-10 * scale);
        }

        #[test]
        fn symmetric_in_a_b(a in -3.0f64..3.0, b in -3.0f64..3.0, z in -0.9f64..0.9) {
            let x = hyp2f1(a, b, 1.7, z, ctl()).unwrap();
            let y = hyp2f1(b, a, 1.7, z, ctl()).unwrap();
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }
}
