use super::alpha_eq_lambda::{generating_alpha_eq_lambda, series_radius};
use super::equal_rates::generating_equal_rates;
use super::kernel::{kernel_h, kernel_h_dt};
use super::law::TransientLaw;
use super::renewal::history_convolution;
use crate::combinatorics::{ComponentWeights, ThetaCoefficients};
use crate::error::{domain, Result};
use crate::model::{ModelParams, Regime};
use crate::specfun::SeriesControl;

/// Precomputed inputs available to [`eval_f`].
#[derive(Debug, Clone, Copy, Default)]
pub struct GfInputs<'a> {
    pub weights: Option<&'a ComponentWeights>,
    pub theta: Option<&'a ThetaCoefficients>,
    /// A `p(0,.)` history on a uniform grid from 0, for the quadrature route.
    pub p0_history: Option<&'a TransientLaw>,
}

/// Representation used for `F(z,t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfRoute {
    EqualRatesSeries,
    AlphaEqLambdaSeries,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GfValue {
    pub value: f64,
    pub route: GfRoute,
    pub trunc_order: usize,
    pub tail_bound: f64,
}

/// `F(z,t) = h(t,z) + (d-1) int_0^t h_t(t-y, z) p(0,y) dy`, by the trapezoidal
/// rule on the history grid.
pub fn eval_f_quadrature(params: &ModelParams, z: f64, t: f64, history: &TransientLaw) -> Result<f64> {
    const OP: &str = "eval_f_quadrature";
    if !(0.0..=1.0).contains(&z) {
        return Err(domain(OP, format!("z = {z} outside [0, 1]")));
    }
    let times = &history.times;
    if times.len() < 2 || times[0] != 0.0 || t < 0.0 || t > *times.last().expect("len >= 2") {
        return Err(domain(OP, format!("t = {t} not covered by the p(0,.) history")));
    }
    let h = kernel_h(params, z, t);
    if params.d == 1 || t == 0.0 {
        return Ok(h);
    }
    let integral = history_convolution(history, t, |y| kernel_h_dt(params, z, t - y));
    Ok(h + (params.d as f64 - 1.0) * integral)
}

/// `F(z,t) = E[z^{N(t)}]`, using the closed series for the solvable families
/// inside their convergence regions and the quadrature route elsewhere.
pub fn eval_f(params: &ModelParams, z: f64, t: f64, inputs: &GfInputs, ctl: SeriesControl) -> Result<GfValue> {
    if !(0.0..=1.0).contains(&z) {
        return Err(domain("eval_f", format!("z = {z} outside [0, 1]")));
    }
    match params.regime() {
        Regime::EqualRates if params.lambda * t < 1.0 && z < 1.0 => {
            if let Some(w) = inputs.weights.filter(|w| w.d() == params.d) {
                let e = generating_equal_rates(params, z, t, w, ctl)?;
                return Ok(GfValue {
                    value: e.value,
                    route: GfRoute::EqualRatesSeries,
                    trunc_order: e.trunc_order,
                    tail_bound: e.tail_bound,
                });
            }
        }
        Regime::AlphaEqLambda
            if t < series_radius(params) && z < 1.0 && (params.mu > params.lambda || z < params.mu / params.lambda) =>
        {
            if let Some(th) = inputs.theta {
                let e = generating_alpha_eq_lambda(params, z, t, th, ctl)?;
                return Ok(GfValue {
                    value: e.value,
                    route: GfRoute::AlphaEqLambdaSeries,
                    trunc_order: e.trunc_order,
                    tail_bound: e.tail_bound,
                });
            }
        }
        _ => {}
    }
    let history = inputs
        .p0_history
        .ok_or_else(|| domain("eval_f", "no closed form applies and no p(0,.) history was supplied"))?;
    let value = eval_f_quadrature(params, z, t, history)?;
    Ok(GfValue {
        value,
        route: GfRoute::Quadrature,
        trunc_order: history.times.len() - 1,
        tail_bound: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::theta_coefficients;
    use crate::transient::{pk_alpha_eq_lambda, pk_equal_rates, series_p0_equal_rates, solve_volterra_p0};
    use approx::assert_relative_eq;

    #[test]
    fn quadrature_edges() {
        let p = ModelParams::new(0.3, 0.5, 0.2, 3).unwrap();
        let hist = solve_volterra_p0(&p, 3.0, 3000).unwrap();
        assert_relative_eq!(eval_f_quadrature(&p, 0.3, 0.0, &hist).unwrap(), 1.0);
        assert_relative_eq!(
            eval_f_quadrature(&p, 1.0, 2.0, &hist).unwrap(),
            1.0,
            max_relative = 1e-14
        );
        let f0 = eval_f_quadrature(&p, 0.0, 2.0, &hist).unwrap();
        assert!((f0 - hist.p0_at(2.0).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn closed_routes_agree_with_quadrature() {
        let ctl = SeriesControl::default();
        let p = ModelParams::new(0.5, 0.5, 0.5, 3).unwrap();
        let w = ComponentWeights::new(3, 400).unwrap();
        let hist = solve_volterra_p0(&p, 1.5, 6000).unwrap();
        let inputs = GfInputs {
            weights: Some(&w),
            ..Default::default()
        };
        for &z in &[0.0, 0.3, 0.8] {
            let a = eval_f(&p, z, 1.2, &inputs, ctl).unwrap();
            assert_eq!(a.route, GfRoute::EqualRatesSeries);
            assert!((a.value - eval_f_quadrature(&p, z, 1.2, &hist).unwrap()).abs() < 1e-6);
        }
        for &(l, m) in &[(0.1, 0.5), (0.5, 0.1)] {
            let p = ModelParams::new(l, l, m, 3).unwrap();
            let th = theta_coefficients(&p, 300).unwrap();
            let hist = solve_volterra_p0(&p, 2.0, 6000).unwrap();
            let inputs = GfInputs {
                theta: Some(&th),
                p0_history: Some(&hist),
                ..Default::default()
            };
            for &z in &[0.0, 0.05, 0.15] {
                let a = eval_f(&p, z, 1.5, &inputs, ctl).unwrap();
                assert_eq!(a.route, GfRoute::AlphaEqLambdaSeries);
                assert!(
                    (a.value - eval_f_quadrature(&p, z, 1.5, &hist).unwrap()).abs() < 1e-6,
                    "z={z}"
                );
            }
            if l > m {
                let q = eval_f(&p, 0.5, 1.5, &inputs, ctl).unwrap();
                assert_eq!(q.route, GfRoute::Quadrature);
            }
        }
    }

    #[test]
    fn derivative_in_z_gives_first_level() {
        let ctl = SeriesControl::default();
        let h = 1e-3;
        let deriv = |f: &dyn Fn(f64) -> f64| {
            let d1 = (f(h) - f(0.0)) / h;
            let d2 = (f(h / 2.0) - f(0.0)) / (h / 2.0);
            2.0 * d2 - d1
        };
        let p = ModelParams::new(0.5, 0.5, 0.5, 2).unwrap();
        let w = ComponentWeights::new(2, 400).unwrap();
        let inputs = GfInputs {
            weights: Some(&w),
            ..Default::default()
        };
        let fd = deriv(&|z| eval_f(&p, z, 1.0, &inputs, ctl).unwrap().value);
        assert!((fd - pk_equal_rates(&p, 1, 1.0, &w, ctl).unwrap().value).abs() < 1e-4);
        assert!(
            (eval_f(&p, 0.0, 1.0, &inputs, ctl).unwrap().value
                - series_p0_equal_rates(&p, 1.0, &w, ctl).unwrap().value)
                .abs()
                < 1e-12
        );

        let p = ModelParams::new(0.1, 0.1, 0.5, 2).unwrap();
        let th = theta_coefficients(&p, 300).unwrap();
        let inputs = GfInputs {
            theta: Some(&th),
            ..Default::default()
        };
        let fd = deriv(&|z| eval_f(&p, z, 1.0, &inputs, ctl).unwrap().value);
        assert!((fd - pk_alpha_eq_lambda(&p, 1, 1.0, &th, ctl).unwrap().value).abs() < 1e-4);
    }

    #[test]
    fn missing_inputs_is_a_domain_error() {
        let p = ModelParams::new(0.3, 0.5, 0.2, 3).unwrap();
        assert!(eval_f(&p, 0.5, 1.0, &GfInputs::default(), SeriesControl::default()).is_err());
    }
}
