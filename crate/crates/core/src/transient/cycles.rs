use super::kernel::kernel_g;
use super::law::Estimate;
use crate::error::{domain, Error, Result};
use crate::model::{Criticality, ModelParams};
use crate::specfun::SeriesControl;

/// Total mass `c = G(inf)` of the kernel: `1 - (1 - lambda/mu)^a` below
/// criticality, 1 otherwise.
fn escape_mass(p: &ModelParams) -> f64 {
    match p.criticality() {
        Criticality::Subcritical => 1.0 - (1.0 - p.lambda / p.mu).powf(p.shape()),
        _ => 1.0,
    }
}

/// Density of the normalized kernel `G / c`.
pub fn cycle_density(params: &ModelParams, t: f64) -> f64 {
    kernel_g(params, t).1 / escape_mass(params)
}

/// Distribution function of the normalized kernel.
pub fn cycle_cdf(params: &ModelParams, t: f64) -> f64 {
    kernel_g(params, t).0 / escape_mass(params)
}

/// Convolution powers `F^(j)` of the normalized kernel on a uniform grid.
#[derive(Debug, Clone)]
pub struct CycleDistribution {
    params: ModelParams,
    dt: f64,
    escape: f64,
    /// `powers[j-1][i] = F^(j)(i dt)`.
    powers: Vec<Vec<f64>>,
    /// Tabulation stopped early because every further term is negligible.
    complete: bool,
}

/// A tabulated power whose weighted value at `t_max` is below this ends the table.
const NEGLIGIBLE: f64 = 1e-18;

/// Tabulates `F^(1..=j_max)` on `n_grid` steps of `[0, t_max]`, with
/// `F^(1)` in closed form and `F^(j+1) = f * F^(j)` by the trapezoidal rule.
/// Stops before `j_max` once `d (d-1)^{j-1} c^j F^(j)(t_max)` is negligible
/// and shrinking.
pub fn build_cycle_distribution(
    params: &ModelParams,
    t_max: f64,
    n_grid: usize,
    j_max: usize,
) -> Result<CycleDistribution> {
    if !(t_max > 0.0 && t_max.is_finite()) || n_grid == 0 || j_max == 0 {
        return Err(Error::InvalidParameter(
            "need t_max > 0, n_grid >= 1, j_max >= 1".into(),
        ));
    }
    let dt = t_max / n_grid as f64;
    let dens: Vec<f64> = (0..=n_grid).map(|i| cycle_density(params, i as f64 * dt)).collect();
    let first: Vec<f64> = (0..=n_grid).map(|i| cycle_cdf(params, i as f64 * dt)).collect();
    let c = escape_mass(params);
    let amp = (params.d as f64 - 1.0) * c;
    let mut weight = params.d as f64 * c;
    let mut complete = amp * weight * first[n_grid] < NEGLIGIBLE;
    let mut powers = vec![first];
    while powers.len() < j_max && !complete {
        let prev = powers.last().expect("non-empty");
        let mut next = vec![0.0; n_grid + 1];
        for i in 1..=n_grid {
            // prev[0] = 0, so the m = i end point drops out.
            let mut s = 0.5 * dens[0] * prev[i];
            for m in 1..i {
                s += dens[m] * prev[i - m];
            }
            next[i] = s * dt;
        }
        weight *= amp;
        // Once the terms shrink geometrically by at least 2, the tail is
        // bounded by the current term.
        let shrink = amp * next[n_grid] <= 0.5 * prev[n_grid];
        complete = shrink && weight * next[n_grid] < NEGLIGIBLE;
        powers.push(next);
    }
    Ok(CycleDistribution {
        params: *params,
        dt,
        escape: c,
        powers,
        complete,
    })
}

impl CycleDistribution {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn t_max(&self) -> f64 {
        self.dt * (self.powers[0].len() - 1) as f64
    }

    pub fn j_max(&self) -> usize {
        self.powers.len()
    }

    /// `F^(j)(t)` by linear interpolation on the grid.
    pub fn power(&self, j: usize, t: f64) -> f64 {
        let row = &self.powers[j - 1];
        let x = t / self.dt;
        let i = (x.floor() as usize).min(row.len() - 2);
        let w = x - i as f64;
        row[i] * (1.0 - w) + row[i + 1] * w
    }
}

/// Largest term magnitude tolerated before the alternating sum is declared
/// unreliable.
const MAX_TERM: f64 = 1e6;

/// `p(0,t) = 1 - d sum_j (1-d)^{j-1} c^j F^(j)(t)` with `c = 1` at or above
/// criticality.
pub fn p0_theorem25(cycles: &CycleDistribution, t: f64, ctl: SeriesControl) -> Result<Estimate> {
    const OP: &str = "p0_theorem25";
    if !(t >= 0.0 && t <= cycles.t_max() * (1.0 + 1e-12)) {
        return Err(domain(
            OP,
            format!("t = {t} outside the tabulated range [0, {}]", cycles.t_max()),
        ));
    }
    let t = t.min(cycles.t_max());
    let d = cycles.params.d as f64;
    let c = cycles.escape;
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut run = 0;
    let mut weight = d * c;
    for j in 1..=cycles.j_max() {
        let term = weight * cycles.power(j, t);
        if term.abs() > MAX_TERM {
            return Err(Error::NonConvergence { op: OP, terms: j });
        }
        sum += term;
        let small = term.abs() <= ctl.rel_tol() * sum.abs().max(f64::MIN_POSITIVE) && term.abs() <= prev;
        run = if small || term == 0.0 { run + 1 } else { 0 };
        prev = term.abs();
        if run >= ctl.consecutive_small() {
            return Ok(Estimate {
                value: 1.0 - sum,
                trunc_order: j,
                tail_bound: prev,
            });
        }
        weight *= (1.0 - d) * c;
    }
    if cycles.complete {
        return Ok(Estimate {
            value: 1.0 - sum,
            trunc_order: cycles.j_max(),
            tail_bound: prev,
        });
    }
    Err(Error::NonConvergence {
        op: OP,
        terms: cycles.j_max(),
    })
}
