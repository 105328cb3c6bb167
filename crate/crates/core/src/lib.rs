//! Birth-death-immigration dynamics on a star graph.
//!
//! A particle system lives on `d` half-lines glued at a common origin. From
//! the origin an immigrant arrives at rate `d * alpha` and starts a uniformly
//! chosen ray at level 1; on a ray at level `k` the population grows at rate
//! `alpha + lambda * k` and shrinks at rate `mu * k`.
//!
//! The crate provides
//! * exact special functions and permutation combinatorics ([`specfun`],
//!   [`combinatorics`]),
//! * the model and a Gillespie simulator ([`model`]),
//! * transient laws from a renewal equation, a cycle expansion and series
//!   representations ([`transient`]),
//! * stationary limits ([`asymptotics`]) and the diffusion limit
//!   ([`diffusion`]).

pub mod asymptotics;
pub mod combinatorics;
pub mod diffusion;
mod error;
pub mod model;
pub mod specfun;
pub mod transient;

pub use asymptotics::{limit_law, limit_moments, AsymptoticLaw, LimitMoments};
pub use combinatorics::{
    q_table, t_bruteforce, t_closed_form, t_table_recursive, theta_coefficients, ComponentWeights,
    PermutationComponentTable, QTable, ThetaCoefficients,
};
pub use diffusion::{
    convergence_probe, induced_ctmc_params, psi, stationary_density, transient_density, DiffusionParams, GammaDensity,
    ProbeReport,
};
pub use error::{Error, Result};
pub use model::{
    empirical_marginal, empirical_marginals, simulate_path, Criticality, EmpiricalMarginal, ModelParams, Regime,
    StarState, Trajectory,
};
pub use specfun::{eulerian_polynomial, gen_exp_integral, hyp2f1, pochhammer, polylog, Polynomial, SeriesControl};
pub use transient::{
    build_cycle_distribution, eval_f, kernel_g, kernel_h, p0_theorem25, pk_alpha_eq_lambda, pk_equal_rates,
    polylog_identity_check, series_p0_alpha_eq_lambda, series_p0_equal_rates, solve_volterra_p0, CycleDistribution,
    Estimate, GfInputs, GfRoute, GfValue, Method, TransientLaw,
};
