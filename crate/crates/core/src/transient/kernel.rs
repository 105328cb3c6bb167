use crate::model::ModelParams;

/// `R(t,z)` with `h = R^a`, and `K(t,z)` with `dh/dt = -alpha (1-z) h K`,
/// written so that no exponential overflows.
fn parts(p: &ModelParams, z: f64, t: f64) -> (f64, f64) {
    let (l, m) = (p.lambda, p.mu);
    if l == m {
        let b = 1.0 + l * t * (1.0 - z);
        (1.0 / b, 1.0 / b)
    } else if l > m {
        let e = (-(l - m) * t).exp();
        let den = l * (1.0 - z) - (m - l * z) * e;
        ((l - m) * e / den, (l - m) / den)
    } else {
        let e = (-(m - l) * t).exp();
        let den = (m - l * z) - l * (1.0 - z) * e;
        ((m - l) / den, (m - l) * e / den)
    }
}

/// Generating function at time `t` of a single ray started empty (the
/// classical linear birth-death-immigration process):
/// `h(t,z) = [(lambda-mu) e^{-(lambda-mu)t} / (lambda(1-z) - (mu-lambda z) e^{-(lambda-mu)t})]^a`
/// with `a = alpha/lambda`, and `(1 + lambda t (1-z))^{-a}` when `lambda = mu`.
pub fn kernel_h(params: &ModelParams, z: f64, t: f64) -> f64 {
    parts(params, z, t).0.powf(params.shape())
}

/// `dh/dt` at `(t, z)`.
pub fn kernel_h_dt(params: &ModelParams, z: f64, t: f64) -> f64 {
    let (r, k) = parts(params, z, t);
    -params.alpha * (1.0 - z) * r.powf(params.shape()) * k
}

/// `(G(t), G'(t))` with `G(t) = 1 - h(t,0)`; `G'(0) = alpha`.
pub fn kernel_g(params: &ModelParams, t: f64) -> (f64, f64) {
    let (r, k) = parts(params, 0.0, t);
    let h = r.powf(params.shape());
    (1.0 - h, params.alpha * h * k)
}
