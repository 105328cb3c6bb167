use crate::model::ModelParams;

/// Route used to compute a transient law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Series,
    Volterra,
    Theorem25,
    MonteCarlo,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Volterra => "volterra",
            Method::Theorem25 => "theorem25",
            Method::MonteCarlo => "mc",
        }
    }
}

/// A computed value with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Terms, grid steps or paths used.
    pub trunc_order: usize,
    /// Estimated size of the neglected part (standard error for Monte Carlo).
    pub tail_bound: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            value,
            trunc_order: 0,
            tail_bound: 0.0,
        }
    }
}

/// `p(0,t)` and optionally `P(k,t)` on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TransientLaw {
    pub params: ModelParams,
    pub method: Method,
    pub times: Vec<f64>,
    pub p0: Vec<Estimate>,
    /// `pk[k-1][i]` is `P(k, times[i])`.
    pub pk: Vec<Vec<Estimate>>,
}

impl TransientLaw {
    pub fn p0_values(&self) -> Vec<f64> {
        self.p0.iter().map(|e| e.value).collect()
    }

    /// Linear interpolation of `p(0,.)` on the grid; `None` outside it.
    pub fn p0_at(&self, t: f64) -> Option<f64> {
        let (first, last) = (*self.times.first()?, *self.times.last()?);
        if t < first || t > last {
            return None;
        }
        let i = self.times.partition_point(|&s| s <= t);
        if i == 0 {
            return Some(self.p0[0].value);
        }
        if i >= self.times.len() {
            return Some(self.p0[self.times.len() - 1].value);
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let w = (t - t0) / (t1 - t0);
        Some(self.p0[i - 1].value * (1.0 - w) + self.p0[i].value * w)
    }
}
