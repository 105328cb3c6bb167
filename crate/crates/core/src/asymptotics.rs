//! Stationary behaviour for `lambda < mu`.

use crate::error::{domain, Result};
use crate::model::ModelParams;

/// Limit law of the distance from the origin.
///
/// Below criticality the law is a mixture: with `c0 = (1 - lambda/mu)^a` and
/// `theta_d = 1 / (1 - (1 - 1/d) c0)`, `P(k) = theta_d pi(k)` for `k >= 1`,
/// where `pi` is the negative binomial law with shape `a = alpha/lambda` and
/// success probability `lambda/mu`, and `p(0) = theta_d c0 / d`. At or above
/// criticality all mass escapes and every limit is 0.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticLaw {
    pub params: ModelParams,
    /// True when `lambda >= mu`.
    pub degenerate: bool,
    pub theta_d: f64,
    pub p0_limit: f64,
    /// `pk_limit[k-1]` for `k = 1..=k_max`.
    pub pk_limit: Vec<f64>,
    /// `nb_pi[k]` for `k = 0..=k_max`.
    pub nb_pi: Vec<f64>,
}

fn c0(p: &ModelParams) -> f64 {
    (1.0 - p.lambda / p.mu).powf(p.shape())
}

fn theta(c0: f64, d: f64) -> f64 {
    1.0 / (1.0 - (1.0 - 1.0 / d) * c0)
}

/// Limit law up to level `k_max`.
pub fn limit_law(params: &ModelParams, k_max: usize) -> AsymptoticLaw {
    if params.lambda >= params.mu {
        return AsymptoticLaw {
            params: *params,
            degenerate: true,
            theta_d: 1.0,
            p0_limit: 0.0,
            pk_limit: vec![0.0; k_max],
            nb_pi: vec![0.0; k_max + 1],
        };
    }
    let c = c0(params);
    let th = theta(c, params.d as f64);
    let a = params.shape();
    let lr = (params.lambda / params.mu).ln();
    let mut ln = a * (-params.lambda / params.mu).ln_1p();
    let mut nb_pi = Vec::with_capacity(k_max + 1);
    nb_pi.push(ln.exp());
    for k in 1..=k_max {
        ln += ((a + k as f64 - 1.0) / k as f64).ln() + lr;
        nb_pi.push(ln.exp());
    }
    AsymptoticLaw {
        params: *params,
        degenerate: false,
        theta_d: th,
        p0_limit: th * c / params.d as f64,
        pk_limit: nb_pi[1..].iter().map(|p| th * p).collect(),
        nb_pi,
    }
}

/// Mean and variance of the limit law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitMoments {
    pub theta_d: f64,
    pub mean: f64,
    pub variance: f64,
}

/// `E = theta_d alpha/(mu-lambda)` and
/// `Var = theta_d^2 alpha mu/(mu-lambda)^2 [1 - (1-1/d)(alpha/mu + 1) c0]`.
/// `d = None` gives the limit of many rays.
pub fn limit_moments(params: &ModelParams, d: Option<u32>) -> Result<LimitMoments> {
    if params.lambda >= params.mu {
        return Err(domain("limit_moments", "no stationary law for lambda >= mu"));
    }
    let frac = d.map_or(1.0, |d| 1.0 - 1.0 / d as f64);
    let c = c0(params);
    let th = 1.0 / (1.0 - frac * c);
    let gap = params.mu - params.lambda;
    let mean = th * params.alpha / gap;
    let variance =
        th * th * params.alpha * params.mu / (gap * gap) * (1.0 - frac * (params.alpha / params.mu + 1.0) * c);
    Ok(LimitMoments {
        theta_d: th,
        mean,
        variance,
    })
}
