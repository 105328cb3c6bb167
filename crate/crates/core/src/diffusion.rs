//! Diffusion limit of the scaled process `epsilon N(t)`.
//!
//! With `alpha = gamma mu'/eps`, `lambda = mu'/eps + beta`, `mu = mu'/eps`
//! (written `gamma`, `mu'`, `beta` below), the density of `epsilon N(t)`
//! summed over rays tends to a gamma law with shape `gamma` and rate
//! `psi(t) = (beta/mu') / (e^{beta t} - 1)`. It solves
//! `h_t = -[(beta x + gamma mu') h]_x + [mu' x h]_xx` with zero flux at 0.

use statrs::function::gamma::{gamma_lr, ln_gamma};

use crate::error::{domain, Error, Result};
use crate::model::{empirical_marginals, ModelParams};

/// Parameters of the diffusion scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionParams {
    pub gamma: f64,
    pub mu: f64,
    pub beta: f64,
    pub epsilon: f64,
}

impl DiffusionParams {
    pub fn new(gamma: f64, mu: f64, beta: f64, epsilon: f64) -> Result<Self> {
        for (name, v) in [("gamma", gamma), ("mu", mu), ("epsilon", epsilon)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("beta must be finite, got {beta}")));
        }
        Ok(DiffusionParams {
            gamma,
            mu,
            beta,
            epsilon,
        })
    }

    /// Inverse of [`induced_ctmc_params`].
    pub fn from_ctmc(params: &ModelParams, epsilon: f64) -> Result<Self> {
        DiffusionParams::new(
            params.alpha / params.mu,
            params.mu * epsilon,
            params.lambda - params.mu,
            epsilon,
        )
    }
}

/// Rates of the chain approximated at scale `epsilon`.
pub fn induced_ctmc_params(dp: &DiffusionParams, d: u32) -> Result<ModelParams> {
    let mu = dp.mu / dp.epsilon;
    ModelParams::new(dp.gamma * mu, mu + dp.beta, mu, d)
}

/// Rate `psi(t)`, continuous through `beta = 0` where it equals `1/(mu' t)`.
pub fn psi(dp: &DiffusionParams, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain("psi", format!("t = {t} must be positive")));
    }
    let bt = dp.beta * t;
    if bt.abs() < 1e-8 {
        return Ok((1.0 - 0.5 * bt) / (dp.mu * t));
    }
    Ok(dp.beta / (dp.mu * bt.exp_m1()))
}

/// Gamma law with `shape` and `rate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaDensity {
    pub shape: f64,
    pub rate: f64,
}

impl GammaDensity {
    pub fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        (self.shape * self.rate.ln() - ln_gamma(self.shape) + (self.shape - 1.0) * x.ln() - self.rate * x).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            gamma_lr(self.shape, self.rate * x)
        }
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }
}

/// `h(., t)`.
pub fn transient_density(dp: &DiffusionParams, t: f64) -> Result<GammaDensity> {
    Ok(GammaDensity {
        shape: dp.gamma,
        rate: psi(dp, t)?,
    })
}

/// The `t -> infinity` limit, a gamma law with rate `|beta|/mu'`; requires `beta < 0`.
pub fn stationary_density(dp: &DiffusionParams) -> Result<GammaDensity> {
    if dp.beta >= 0.0 {
        return Err(domain("stationary_density", "requires beta < 0"));
    }
    Ok(GammaDensity {
        shape: dp.gamma,
        rate: dp.beta.abs() / dp.mu,
    })
}

fn density_at(dp: &DiffusionParams, x: f64, t: f64) -> f64 {
    transient_density(dp, t).map(|g| g.pdf(x)).unwrap_or(f64::NAN)
}

/// Residual of the Fokker-Planck equation at `(x, t)` by central differences
/// of step `step` in `x` and `step * min(t, 1)` in `t`, relative to the sum
/// of the magnitudes of its three terms.
pub fn fokker_planck_residual(dp: &DiffusionParams, x: f64, t: f64, step: f64) -> f64 {
    let h = |x: f64, t: f64| density_at(dp, x, t);
    let drift = |x: f64| (dp.beta * x + dp.gamma * dp.mu) * h(x, t);
    let diff = |x: f64| dp.mu * x * h(x, t);
    let st = step * t.min(1.0);
    let dt = (h(x, t + st) - h(x, t - st)) / (2.0 * st);
    let dx = (drift(x + step) - drift(x - step)) / (2.0 * step);
    let dxx = (diff(x + step) - 2.0 * diff(x) + diff(x - step)) / (step * step);
    (dt + dx - dxx).abs() / (dt.abs() + dx.abs() + dxx.abs())
}

/// Probability flux `(beta x + gamma mu') h - (mu' x h)_x` at `(x, t)`,
/// evaluated analytically; it equals `x h (beta + mu' psi)` and vanishes at 0.
pub fn boundary_flux(dp: &DiffusionParams, x: f64, t: f64) -> Result<f64> {
    let g = transient_density(dp, t)?;
    Ok(x * g.pdf(x) * (dp.beta + dp.mu * g.rate))
}

/// Distance between the simulated scaled chain and its diffusion limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeReport {
    pub epsilon: f64,
    pub t: f64,
    /// `max_k |P(N(t) < k) - G(k epsilon)|` over lattice points `k >= 1`.
    pub ks_distance: f64,
    /// 95% Kolmogorov band `1.36 / sqrt(n_paths)` for the sampling noise alone.
    pub noise_band: f64,
    pub n_paths: u64,
    pub seed: u64,
}

/// Simulates the chain induced at scale `epsilon` and measures the
/// Kolmogorov distance of `epsilon N(t)` to the gamma limit on the lattice.
pub fn convergence_probe(dp: &DiffusionParams, d: u32, t: f64, n_paths: u64, seed: u64) -> Result<ProbeReport> {
    let params = induced_ctmc_params(dp, d)?;
    let limit = transient_density(dp, t)?;
    let x_max = limit.mean() * 40.0 + 40.0 / limit.rate;
    let k_max = ((x_max / dp.epsilon).ceil() as usize).max(10);
    let m = empirical_marginals(&params, &[t], n_paths, seed, k_max)?.remove(0);
    let mut below = 0.0;
    let mut ks = 0.0f64;
    for k in 1..=k_max {
        below += m.probability(k - 1);
        ks = ks.max((below - limit.cdf(k as f64 * dp.epsilon)).abs());
    }
    Ok(ProbeReport {
        epsilon: dp.epsilon,
        t,
        ks_distance: ks,
        noise_band: 1.36 / (n_paths as f64).sqrt(),
        n_paths,
        seed,
    })
}
