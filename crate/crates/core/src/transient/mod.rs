//! Transient law of the distance from the origin.
//!
//! `p(0,t)` solves the renewal equation
//! `p(0,t) = 1 - G(t) - (d-1) int_0^t G'(t-y) p(0,y) dy`,
//! with `1 - G(t) = h(t,0)` the probability that a single classical
//! birth-death-immigration ray started empty is empty at `t`. Four routes
//! are provided: the renewal equation on a grid ([`solve_volterra_p0`]), the
//! expansion over excursion counts ([`p0_theorem25`]), and power series in
//! `lambda t` for the two solvable families ([`series_p0_equal_rates`],
//! [`series_p0_alpha_eq_lambda`]).

mod alpha_eq_lambda;
mod classical;
mod cycles;
mod equal_rates;
mod generating;
mod kernel;
mod law;
mod renewal;
mod volterra;

pub use alpha_eq_lambda::{
    g_k_eval, g_k_stable, generating_alpha_eq_lambda, pk_alpha_eq_lambda, series_p0_alpha_eq_lambda, series_radius,
};
pub use classical::{linear_bdi_p0, linear_bdi_pmf, linear_bdi_pmf_dt, polylog_identity_check, PolylogCheck};
pub use cycles::{build_cycle_distribution, cycle_cdf, cycle_density, p0_theorem25, CycleDistribution};
pub use equal_rates::{generating_equal_rates, pk_equal_rates, series_p0_equal_rates};
pub use generating::{eval_f, eval_f_quadrature, GfInputs, GfRoute, GfValue};
pub use kernel::{kernel_g, kernel_h, kernel_h_dt};
pub use law::{Estimate, Method, TransientLaw};
pub use renewal::{pk_renewal, pk_renewal_history};
pub use volterra::solve_volterra_p0;
