use crate::error::{domain, Result};
use crate::model::ModelParams;
use crate::specfun::{hyp2f1, polylog, SeriesControl, SeriesSum};

fn success(p: &ModelParams, t: f64) -> f64 {
    let (l, m) = (p.lambda, p.mu);
    if l == m {
        l * t / (1.0 + l * t)
    } else if l > m {
        let e = (-(l - m) * t).exp();
        l * (1.0 - e) / (l - m * e)
    } else {
        let e = (-(m - l) * t).exp();
        l * (1.0 - e) / (m - l * e)
    }
}

/// Law of a single ray started empty (the `d = 1` process): negative
/// binomial, `P(k,t) = (a)_k/k! q^k (1-q)^a` with `a = alpha/lambda` and
/// `q = lambda(1 - E)/(lambda - mu E)`, `E = e^{-(lambda-mu)t}`.
pub fn linear_bdi_pmf(params: &ModelParams, k: usize, t: f64) -> f64 {
    let q = success(params, t);
    let a = params.shape();
    if q == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let mut ln = a * (-q).ln_1p();
    for i in 0..k {
        ln += ((a + i as f64) / (i as f64 + 1.0)).ln() + q.ln();
    }
    ln.exp()
}

/// `dq/dt` for the success probability of [`linear_bdi_pmf`].
fn success_dt(p: &ModelParams, t: f64) -> f64 {
    let (l, m) = (p.lambda, p.mu);
    if l == m {
        l / (1.0 + l * t).powi(2)
    } else if l > m {
        let e = (-(l - m) * t).exp();
        l * (l - m).powi(2) * e / (l - m * e).powi(2)
    } else {
        let e = (-(m - l) * t).exp();
        l * (m - l).powi(2) * e / (m - l * e).powi(2)
    }
}

/// `d/dt` of the single-ray law at level `k`:
/// `(a)_k/k! q^{k-1} (1-q)^{a-1} (k(1-q) - a q) dq/dt`.
pub fn linear_bdi_pmf_dt(params: &ModelParams, k: usize, t: f64) -> f64 {
    let q = success(params, t);
    let a = params.shape();
    let dq = success_dt(params, t);
    if k == 0 {
        return -a * (1.0 - q).powf(a - 1.0) * dq;
    }
    if q == 0.0 {
        return if k == 1 { a * dq } else { 0.0 };
    }
    let mut ln = (a - 1.0) * (-q).ln_1p() + (k as f64 - 1.0) * q.ln();
    for i in 0..k {
        ln += ((a + i as f64) / (i as f64 + 1.0)).ln();
    }
    ln.exp() * (k as f64 * (1.0 - q) - a * q) * dq
}

/// `P(0,t)` of the single-ray process.
pub fn linear_bdi_p0(params: &ModelParams, t: f64) -> f64 {
    linear_bdi_pmf(params, 0, t)
}

/// Both sides of `Li_{k+1}(x) = x sum_{s>=1} 2F1(1-s, k+1; 1; 1-x) / s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolylogCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub terms: usize,
}

/// Evaluates the polylogarithm / hypergeometric series identity at `x` in (0,1).
pub fn polylog_identity_check(k: u32, x: f64, ctl: SeriesControl) -> Result<PolylogCheck> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain("polylog_identity_check", format!("x = {x} outside (0, 1)")));
    }
    let lhs = polylog(k + 1, x, ctl)?;
    let mut err = None;
    let out = SeriesSum::run(ctl, "polylog_identity_check", 1, |s| {
        match hyp2f1(1.0 - s as f64, k as f64 + 1.0, 1.0, 1.0 - x, ctl) {
            Ok(v) => v / s as f64,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let rhs = x * out.value;
    Ok(PolylogCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        terms: out.terms,
    })
}
