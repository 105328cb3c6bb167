use super::law::Estimate;
use crate::combinatorics::ComponentWeights;
use crate::error::{domain, Error, Result};
use crate::model::{ModelParams, Regime};
use crate::specfun::{hyp2f1, SeriesControl, SeriesSum};

fn check(params: &ModelParams, t: f64, w: &ComponentWeights, op: &'static str) -> Result<f64> {
    if params.regime() != Regime::EqualRates {
        return Err(domain(op, "requires alpha = lambda = mu"));
    }
    if w.d() != params.d {
        return Err(domain(
            op,
            format!("weights built for d = {}, model has d = {}", w.d(), params.d),
        ));
    }
    let x = params.lambda * t;
    if !(0.0..1.0).contains(&x) {
        return Err(domain(op, format!("lambda t = {x} outside [0, 1)")));
    }
    Ok(x)
}

fn geometric_tail(last: f64, x: f64) -> f64 {
    last * x / (1.0 - x)
}

/// Sums `sum_{n>=start} term(n)` with `n` limited by the weight table.
fn run_series(
    ctl: SeriesControl,
    op: &'static str,
    start: usize,
    n_max: usize,
    x: f64,
    mut term: impl FnMut(usize) -> Result<f64>,
) -> Result<Estimate> {
    let ctl = ctl.with_max_terms(ctl.max_terms().min(n_max + 1 - start));
    let mut s = SeriesSum::new(ctl);
    let mut n = start;
    loop {
        if s.add(term(n)?) {
            let o = s.outcome();
            return Ok(Estimate {
                value: o.value,
                trunc_order: n,
                tail_bound: geometric_tail(o.tail, x),
            });
        }
        if s.exhausted() {
            return Err(Error::NonConvergence { op, terms: s.terms() });
        }
        n += 1;
    }
}

/// `p(0,t) = 1 + sum_{n>=1} (-lambda t)^n w_n` for `lambda t < 1`, with the
/// component weights `w_n = sum_k t(n,k) d^k / n!`.
pub fn series_p0_equal_rates(
    params: &ModelParams,
    t: f64,
    weights: &ComponentWeights,
    ctl: SeriesControl,
) -> Result<Estimate> {
    const OP: &str = "series_p0_equal_rates";
    let x = check(params, t, weights, OP)?;
    run_series(ctl, OP, 0, weights.n_max(), x, |n| {
        Ok((-x).powi(n as i32) * weights.get(n))
    })
}

/// Generating function `F(z,t) = E[z^N(t)]` for equal rates.
pub fn generating_equal_rates(
    params: &ModelParams,
    z: f64,
    t: f64,
    weights: &ComponentWeights,
    ctl: SeriesControl,
) -> Result<Estimate> {
    const OP: &str = "generating_equal_rates";
    let x = check(params, t, weights, OP)?;
    if !(0.0..=1.0).contains(&z) {
        return Err(domain(OP, format!("z = {z} outside [0, 1]")));
    }
    let p0 = series_p0_equal_rates(params, t, weights, ctl)?;
    let a = 1.0 / (1.0 + x * (1.0 - z));
    let u = 1.0 - a;
    let dm1 = params.d as f64 - 1.0;
    let sum = run_series(ctl, OP, 1, weights.n_max(), x, |n| {
        let nf = n as f64;
        let f = hyp2f1(1.0, nf + 1.0, nf + 2.0, u, ctl)?;
        Ok(nf / (nf + 1.0) * (-x).powi(n as i32 + 1) * weights.get(n) * f)
    })?;
    let value = a - x * dm1 * (1.0 - z) * a * p0.value - dm1 * (1.0 - z) * a * a * sum.value;
    Ok(Estimate {
        value,
        trunc_order: sum.trunc_order.max(p0.trunc_order),
        tail_bound: p0.tail_bound * x * dm1 + sum.tail_bound * dm1,
    })
}

/// Threshold on the disagreement between the two inner-sum representations
/// beyond which the term-by-term hypergeometric series is abandoned.
const INNER_SWITCH: f64 = 1e-9;

/// The inner sum `S_n(k) = sum_r n/(n+r) y^r 2F1(-r,-k;1;-1/x)` summed
/// literally, with `y = x/(1+x)`.
fn inner_literal(n: usize, f_r: &[f64], y: f64) -> f64 {
    let nf = n as f64;
    let mut yr = 1.0;
    let mut s = 0.0;
    for (r, f) in f_r.iter().enumerate() {
        s += nf / (nf + r as f64) * yr * f;
        yr *= y;
    }
    s
}

/// The same sum in closed form, `2F1(k+1, n; n+k+1; y) / C(n+k, k)`.
fn inner_closed(n: usize, k: usize, y: f64, ctl: SeriesControl) -> Result<f64> {
    let (nf, kf) = (n as f64, k as f64);
    let ln_binom = statrs::function::gamma::ln_gamma(nf + kf + 1.0)
        - statrs::function::gamma::ln_gamma(nf + 1.0)
        - statrs::function::gamma::ln_gamma(kf + 1.0);
    Ok(hyp2f1(kf + 1.0, nf, nf + kf + 1.0, y, ctl)? * (-ln_binom).exp())
}

/// `P(k,t)` for equal rates and `k >= 1`:
/// `x^k/(1+x)^{k+1} [d + (d-1) sum_n (-x)^n w_n S_n(k)]` with `x = lambda t`.
///
/// `k = 0` returns `p(0,t)`.
pub fn pk_equal_rates(
    params: &ModelParams,
    k: usize,
    t: f64,
    weights: &ComponentWeights,
    ctl: SeriesControl,
) -> Result<Estimate> {
    const OP: &str = "pk_equal_rates";
    if k == 0 {
        return series_p0_equal_rates(params, t, weights, ctl);
    }
    let x = check(params, t, weights, OP)?;
    if x == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let y = x / (1.0 + x);
    let d = params.d as f64;
    let kf = k as f64;

    // Terminating factors 2F1(-r,-k;1;-1/x), summed until y^r |F_r| is negligible.
    let mut f_r = Vec::new();
    let mut yr = 1.0;
    let mut scale = 0.0f64;
    let mut run = 0;
    for r in 0..ctl.max_terms() {
        let f = hyp2f1(-(r as f64), -kf, 1.0, -1.0 / x, ctl)?;
        let mag = (yr * f).abs();
        scale = scale.max(mag);
        f_r.push(f);
        run = if mag <= 1e-17 * scale { run + 1 } else { 0 };
        if run >= ctl.consecutive_small() && r > k {
            break;
        }
        yr *= y;
    }
    let literal_ok = {
        let a = inner_literal(1, &f_r, y);
        let b = inner_closed(1, k, y, ctl)?;
        (a - b).abs() <= INNER_SWITCH * b.abs()
    };
    let sum = run_series(ctl, OP, 1, weights.n_max(), x, |n| {
        let s = if literal_ok {
            inner_literal(n, &f_r, y)
        } else {
            inner_closed(n, k, y, ctl)?
        };
        Ok((-x).powi(n as i32) * weights.get(n) * s)
    })?;
    let pre = (kf * x.ln() - (kf + 1.0) * x.ln_1p()).exp();
    Ok(Estimate {
        value: pre * (d + (d - 1.0) * sum.value),
        trunc_order: sum.trunc_order,
        tail_bound: pre * (d - 1.0) * sum.tail_bound,
    })
}
