//! Special functions used by the series representations.
//!
//! Everything here is deterministic and uses explicit truncation rules
//! described by [`SeriesControl`].

mod eulerian;
mod expint;
mod hypergeometric;
mod kummer;
mod polylog;
pub mod quadrature;
mod series;

pub use eulerian::{eulerian_polynomial, EulerianRows, Polynomial};
pub use expint::gen_exp_integral;
pub(crate) use hypergeometric::hyp2f1_terminating;
pub use hypergeometric::{hyp2f1, pochhammer};
pub use kummer::{exp_remainder_ratio, exp_remainder_ratios};
pub use polylog::polylog;
pub use series::{SeriesControl, SeriesOutcome};

pub(crate) use series::SeriesSum;

/// Natural logarithms of `0!, 1!, ..., n!` built by summation.
#[derive(Debug, Clone)]
pub(crate) struct LnFactorials(Vec<f64>);

impl LnFactorials {
    pub(crate) fn new(n: usize) -> Self {
        let mut v = Vec::with_capacity(n + 1);
        let mut acc = 0.0f64;
        v.push(0.0);
        for k in 1..=n {
            acc += (k as f64).ln();
            v.push(acc);
        }
        LnFactorials(v)
    }

    #[inline]
    pub(crate) fn get(&self, n: usize) -> f64 {
        self.0[n]
    }

    #[inline]
    pub(crate) fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        self.0[n] - self.0[k] - self.0[n - k]
    }
}
