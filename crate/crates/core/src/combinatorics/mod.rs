//! Counting permutations by connected components, and the Eulerian
//! composition sums that drive the series for `alpha = lambda`.
//!
//! A permutation of `1..n` splits into components at every `i` where its
//! first `i` values are exactly `{1..i}`; `t(n,k)` counts permutations with
//! `k` components.

mod components;
mod exact;
mod qsums;
mod theta;

pub use components::{
    component_count, indecomposable_counts, t_bruteforce, t_bruteforce_row, t_closed_form, t_table_recursive,
    ComponentWeights, PermutationComponentTable,
};
pub use qsums::{q_table, EulerianValues, QTable};
pub use theta::{theta_coefficients, ThetaCoefficients};
