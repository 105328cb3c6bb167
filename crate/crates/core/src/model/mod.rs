//! Model parameters, state space and Monte Carlo simulation.

mod marginal;
mod params;
mod simulate;

pub use marginal::{empirical_marginal, empirical_marginals, EmpiricalMarginal, DEFAULT_K_MAX};
pub use params::{Criticality, ModelParams, Regime};
pub use simulate::{path_rng, simulate_path, StarState, Trajectory, LEVEL_CAP};
