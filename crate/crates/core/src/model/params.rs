use crate::error::{Error, Result};

/// Rates of the star-graph process.
///
/// `alpha` is the per-ray immigration rate (the origin is left at rate
/// `d * alpha`), `lambda` and `mu` the per-capita birth and death rates, `d`
/// the number of rays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub alpha: f64,
    pub lambda: f64,
    pub mu: f64,
    pub d: u32,
}

/// Parameter families with dedicated closed-form machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `mu = alpha = lambda`.
    EqualRates,
    /// `alpha = lambda`, `mu != lambda`.
    AlphaEqLambda,
    Subcritical,
    Supercritical,
    Critical,
}

/// Ordering of `lambda` and `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criticality {
    Subcritical,
    Critical,
    Supercritical,
}

impl ModelParams {
    pub fn new(alpha: f64, lambda: f64, mu: f64, d: u32) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("lambda", lambda), ("mu", mu)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if d == 0 {
            return Err(Error::InvalidParameter("d must be at least 1".into()));
        }
        Ok(ModelParams { alpha, lambda, mu, d })
    }

    /// Exact-equality classification; the first two families take precedence.
    pub fn regime(&self) -> Regime {
        if self.alpha == self.lambda && self.mu == self.lambda {
            Regime::EqualRates
        } else if self.alpha == self.lambda {
            Regime::AlphaEqLambda
        } else {
            match self.criticality() {
                Criticality::Subcritical => Regime::Subcritical,
                Criticality::Critical => Regime::Critical,
                Criticality::Supercritical => Regime::Supercritical,
            }
        }
    }

    pub fn criticality(&self) -> Criticality {
        if self.lambda < self.mu {
            Criticality::Subcritical
        } else if self.lambda > self.mu {
            Criticality::Supercritical
        } else {
            Criticality::Critical
        }
    }

    /// `alpha / lambda`, the shape of the per-ray excursion law.
    pub fn shape(&self) -> f64 {
        self.alpha / self.lambda
    }

    pub fn with_d(&self, d: u32) -> Self {
        ModelParams { d, ..*self }
    }
}
