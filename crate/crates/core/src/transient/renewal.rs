use super::classical::{linear_bdi_pmf, linear_bdi_pmf_dt};
use super::law::{Estimate, TransientLaw};
use crate::error::{domain, Result};
use crate::model::ModelParams;
use crate::specfun::quadrature::integrate;

/// `P(k,t) = P_1(k,t) + (d-1) int_0^t dP_1/dt(k, t-y) p(0,y) dy`, the level-`k`
/// coefficient of the renewal form of the generating function, where `P_1` is
/// the single-ray law and `p0` any accurate `p(0,.)` on `[0, t]`.
///
/// Well conditioned for every `k`, unlike the closed series at large `k`.
pub fn pk_renewal(params: &ModelParams, k: usize, t: f64, mut p0: impl FnMut(f64) -> Result<f64>) -> Result<Estimate> {
    const OP: &str = "pk_renewal";
    if !(t >= 0.0 && t.is_finite()) {
        return Err(domain(OP, format!("t = {t} must be finite and nonnegative")));
    }
    let lead = linear_bdi_pmf(params, k, t);
    if params.d == 1 || t == 0.0 {
        return Ok(Estimate::exact(lead));
    }
    let mut err = None;
    let q = integrate(
        |y| match p0(y) {
            Ok(v) => linear_bdi_pmf_dt(params, k, t - y) * v,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        0.0,
        t,
        1e-300,
        1e-11,
        4000,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    let dm1 = params.d as f64 - 1.0;
    Ok(Estimate {
        value: lead + dm1 * q.value,
        trunc_order: q.intervals,
        tail_bound: dm1 * q.error,
    })
}

/// [`pk_renewal`] with `p(0,.)` taken from a grid history, integrated by the
/// trapezoidal rule on that grid. Accurate to the grid's `O(dt^2)`.
pub fn pk_renewal_history(params: &ModelParams, k: usize, t: f64, history: &TransientLaw) -> Result<Estimate> {
    let times = &history.times;
    if times.len() < 2 || times[0] != 0.0 || !(t >= 0.0 && t <= *times.last().expect("len >= 2")) {
        return Err(domain(
            "pk_renewal_history",
            format!("t = {t} not covered by the p(0,.) history"),
        ));
    }
    let lead = linear_bdi_pmf(params, k, t);
    if params.d == 1 || t == 0.0 {
        return Ok(Estimate::exact(lead));
    }
    let q = history_convolution(history, t, |y| linear_bdi_pmf_dt(params, k, t - y));
    Ok(Estimate {
        value: lead + (params.d as f64 - 1.0) * q,
        trunc_order: times.len() - 1,
        tail_bound: 0.0,
    })
}

/// `int_0^t g(y) p(0,y) dy` by the trapezoidal rule on the history grid,
/// with a last partial cell up to `t`. The caller checks that `t` is covered.
pub(crate) fn history_convolution(history: &TransientLaw, t: f64, g: impl Fn(f64) -> f64) -> f64 {
    let times = &history.times;
    let dt = times[1] - times[0];
    let f = |i: usize| g(times[i]) * history.p0[i].value;
    let m = ((t / dt).floor() as usize).min(times.len() - 1);
    let mut integral = 0.0;
    if m >= 1 {
        let mut s = 0.5 * (f(0) + f(m));
        for i in 1..m {
            s += f(i);
        }
        integral = s * dt;
    }
    let rest = t - times[m];
    if rest > 0.0 {
        let pt = history.p0_at(t).expect("t inside history");
        integral += 0.5 * rest * (f(m) + g(t) * pt);
    }
    integral
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transient::solve_volterra_p0;

    #[test]
    fn single_ray_is_the_classical_law() {
        let p = ModelParams::new(0.3, 0.2, 0.6, 1).unwrap();
        let e = pk_renewal(&p, 3, 2.0, |_| unreachable!()).unwrap();
        assert_eq!(e.value, linear_bdi_pmf(&p, 3, 2.0));
    }

    #[test]
    fn level_zero_reproduces_p0() {
        let p = ModelParams::new(0.3, 0.2, 0.6, 3).unwrap();
        let vol = solve_volterra_p0(&p, 2.0, 8000).unwrap();
        let e = pk_renewal(&p, 0, 2.0, |y| Ok(vol.p0_at(y).unwrap())).unwrap();
        assert!((e.value - vol.p0_at(2.0).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn grid_route_matches_adaptive_route() {
        // the adaptive rule needs a smooth p(0,.), so take the series one
        let p = ModelParams::new(0.1, 0.1, 0.5, 3).unwrap();
        let th = crate::combinatorics::theta_coefficients(&p, 300).unwrap();
        let ctl = crate::specfun::SeriesControl::default();
        let vol = solve_volterra_p0(&p, 2.0, 8000).unwrap();
        for k in [0, 1, 4, 30] {
            for t in [0.37, 2.0] {
                let smooth = |y| crate::transient::series_p0_alpha_eq_lambda(&p, y, &th, ctl).map(|e| e.value);
                let a = pk_renewal(&p, k, t, smooth).unwrap().value;
                let b = pk_renewal_history(&p, k, t, &vol).unwrap().value;
                assert!((a - b).abs() < 1e-7, "k = {k}, t = {t}: {a} vs {b}");
            }
        }
    }
}
