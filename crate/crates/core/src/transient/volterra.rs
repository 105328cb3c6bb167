use super::kernel::kernel_g;
use super::law::{Estimate, Method, TransientLaw};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Solves the renewal equation for `p(0,t)` on `n_steps` uniform steps of
/// `[0, t_max]` with the product trapezoid rule. The diagonal term is kept
/// implicit, giving the divisor `1 + (d-1) G'(0) dt / 2`. `O(n^2)` work.
pub fn solve_volterra_p0(params: &ModelParams, t_max: f64, n_steps: usize) -> Result<TransientLaw> {
    if !(t_max > 0.0 && t_max.is_finite()) || n_steps == 0 {
        return Err(Error::InvalidParameter(format!(
            "need t_max > 0 and n_steps >= 1, got {t_max} and {n_steps}"
        )));
    }
    let dt = t_max / n_steps as f64;
    let mut kern = Vec::with_capacity(n_steps + 1);
    let mut forcing = Vec::with_capacity(n_steps + 1);
    for i in 0..=n_steps {
        let t = i as f64 * dt;
        let (g, gp) = kernel_g(params, t);
        if !gp.is_finite() || !g.is_finite() {
            return Err(Error::SingularKernel { t });
        }
        kern.push(gp);
        forcing.push(1.0 - g);
    }
    let c = (params.d as f64 - 1.0) * dt;
    let diag = 1.0 + 0.5 * c * kern[0];
    let mut p = vec![0.0; n_steps + 1];
    p[0] = 1.0;
    for i in 1..=n_steps {
        let mut s = 0.5 * kern[i] * p[0];
        for j in 1..i {
            s += kern[i - j] * p[j];
        }
        p[i] = (forcing[i] - c * s) / diag;
    }
    let times = (0..=n_steps).map(|i| i as f64 * dt).collect();
    let p0 = p
        .into_iter()
        .map(|value| Estimate {
            value,
            trunc_order: n_steps,
            tail_bound: 0.0,
        })
        .collect();
    Ok(TransientLaw {
        params: *params,
        method: Method::Volterra,
        times,
        p0,
        pk: Vec::new(),
    })
}
