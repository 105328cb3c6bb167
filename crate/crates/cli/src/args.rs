use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::grid::Grid;

/// Transient laws, simulation and limits of birth-death-immigration
/// dynamics on a star graph.
#[derive(Debug, Clone, Parser)]
#[command(name = "starbdi", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// p(0,t) and P(k,t) on a time grid.
    Transient(TransientArgs),
    /// Monte Carlo marginals of the level process.
    Simulate(SimulateArgs),
    /// Stationary limit law and its moments.
    Asymptotic(AsymptoticArgs),
    /// Gamma transient density of the diffusion limit, or a convergence probe.
    Diffusion(DiffusionArgs),
    /// Table of permutations of [n] by number of components.
    Combinatorics(CombinatoricsArgs),
    /// Cross-method validation campaign.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Immigration rate.
    #[arg(long)]
    pub alpha: f64,
    /// Birth rate per individual.
    #[arg(long)]
    pub lambda: f64,
    /// Death rate per individual.
    #[arg(long)]
    pub mu: f64,
    /// Number of rays.
    #[arg(long, default_value_t = 1)]
    pub d: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Series,
    Volterra,
    Theorem25,
    Mc,
    /// Series inside its radius for the solvable families, Volterra otherwise.
    Auto,
}

#[derive(Debug, Clone, Args)]
pub struct TransientArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Time grid `start:stop:points`.
    #[arg(long)]
    pub t: Grid,
    /// Largest level k reported besides p(0,t).
    #[arg(long = "k", default_value_t = 1)]
    pub k_max: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Paths for `--method mc`.
    #[arg(long, default_value_t = 100_000)]
    pub paths: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Grid steps for the Volterra and cycle routes.
    #[arg(long, default_value_t = 4096)]
    pub steps: usize,
    /// Relative truncation tolerance of the series.
    #[arg(long, default_value_t = 1e-12)]
    pub rel_tol: f64,
    /// Cap on series terms.
    #[arg(long, default_value_t = 10_000)]
    pub max_terms: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub t: Grid,
    /// Levels tabulated individually; higher levels go to an overflow row.
    #[arg(long = "k", default_value_t = 200)]
    pub k_max: usize,
    #[arg(long, default_value_t = 100_000)]
    pub paths: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AsymptoticArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long = "k", default_value_t = 50)]
    pub k_max: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DiffusionArgs {
    #[arg(long)]
    pub gamma: f64,
    /// Diffusion coefficient mu'.
    #[arg(long)]
    pub mu: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long)]
    pub t: Grid,
    /// Space grid `start:stop:points` for the density table.
    #[arg(long, default_value = "0.1:5:50")]
    pub x: Grid,
    /// Compare simulations of the scaled chain with the gamma law instead.
    #[arg(long)]
    pub probe: bool,
    /// Rays of the simulated chain.
    #[arg(long, default_value_t = 3)]
    pub d: u32,
    #[arg(long, default_value_t = 10_000)]
    pub paths: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CombinatoricsArgs {
    #[arg(long, default_value_t = 30)]
    pub nmax: usize,
    /// Also compare the recursion with the closed form and, for n <= 9,
    /// with enumeration.
    #[arg(long)]
    pub check: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Fewer Monte Carlo paths.
    #[arg(long)]
    pub quick: bool,
    /// Run only these criteria (1-8).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
    /// Per-check report as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
