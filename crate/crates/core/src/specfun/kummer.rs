/// `phi_n(u) = 1F1(1; n+1; -u)`, the exponential remainder ratio
/// `n! (-u)^{-n} (e^{-u} - sum_{r<n} (-u)^r / r!)`.
///
/// Equal to 1 at `u = 0` and decreasing like `n/u` for large `u`.
pub fn exp_remainder_ratio(n: usize, u: f64) -> f64 {
    if u == 0.0 {
        return 1.0;
    }
    if n == 0 {
        return (-u).exp();
    }
    let nf = n as f64;
    if u > 2.0 * nf + 20.0 {
        // Alternating expansion in 1/u; terms shrink by at least a half.
        let mut term = 1.0;
        let mut sum = 0.0;
        for i in 1..=n {
            term *= (nf - i as f64 + 1.0) / u;
            sum += if i % 2 == 1 { term } else { -term };
            if term < 1e-18 * sum.abs() {
                break;
            }
        }
        let lnfact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
        let tail = (lnfact - u - nf * u.ln()).exp();
        return sum + if n % 2 == 0 { tail } else { -tail };
    }
    // e^{-u} sum_m n/(n+m) u^m/m!, all terms positive.
    let lu = u.ln();
    let mut lt = -u;
    let mut sum = 0.0;
    let mut m = 0usize;
    loop {
        let term = lt.exp() * nf / (nf + m as f64);
        sum += term;
        m += 1;
        if m as f64 > u && term < 1e-18 * sum {
            return sum;
        }
        lt += lu - (m as f64).ln();
    }
}

/// `phi_n(u)` for `n = 0..=n_max`, by the contiguous recurrence
/// `phi_{n+1} = (n+1)(1 - phi_n)/u`, run upward below `n = u` and downward
/// above it, the stable direction in each range.
pub fn exp_remainder_ratios(n_max: usize, u: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if u == 0.0 {
        out.iter_mut().for_each(|v| *v = 1.0);
        return out;
    }
    let pivot = (u.floor() as usize).min(n_max);
    out[0] = (-u).exp();
    for n in 0..pivot {
        out[n + 1] = (n as f64 + 1.0) * (1.0 - out[n]) / u;
    }
    if pivot < n_max {
        out[n_max] = exp_remainder_ratio(n_max, u);
        for n in (pivot + 1..n_max).rev() {
            out[n] = 1.0 - u * out[n + 1] / (n as f64 + 1.0);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Midpoint oracle for phi_n(u) = n int_0^1 e^{-u s} (1-s)^{n-1} ds.
    fn oracle(n: usize, u: f64) -> f64 {
        let m = 200_000;
        let h = 1.0 / m as f64;
        let nf = n as f64;
        (0..m)
            .map(|i| {
                let s = (i as f64 + 0.5) * h;
                (-u * s).exp() * (1.0 - s).powf(nf - 1.0)
            })
            .sum::<f64>()
            * h
            * nf
    }

    #[test]
    fn low_orders_closed_form() {
        for &u in &[0.3, 2.0, 17.5] {
            assert_relative_eq!(exp_remainder_ratio(1, u), -(-u).exp_m1() / u, max_relative = 1e-13);
            let two = 2.0 * ((-u).exp() - 1.0 + u) / (u * u);
            assert_relative_eq!(exp_remainder_ratio(2, u), two, max_relative = 1e-12);
        }
    }

    #[test]
    fn matches_integral_oracle() {
        for &(n, u) in &[(3usize, 0.5), (10, 4.0), (25, 60.0), (40, 12.0), (5, 30.0)] {
            assert_relative_eq!(exp_remainder_ratio(n, u), oracle(n, u), max_relative = 1e-8);
        }
    }

    #[test]
    fn vector_matches_pointwise() {
        for &u in &[0.0, 0.7, 5.3, 40.0, 250.0, 900.0] {
            let v = exp_remainder_ratios(300, u);
            for n in [0usize, 1, 2, 7, 50, 150, 299, 300] {
                assert_relative_eq!(v[n], exp_remainder_ratio(n, u), max_relative = 1e-11, epsilon = 1e-300);
            }
        }
    }
}
