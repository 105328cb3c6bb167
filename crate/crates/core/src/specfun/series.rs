use crate::error::{Error, Result};

/// Truncation rule shared by every series evaluation.
///
/// A series stops once `consecutive_small` successive terms each satisfy
/// `|term| <= rel_tol * |partial sum|`. Reaching `max_terms` first is a
/// [`Error::NonConvergence`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    rel_tol: f64,
    max_terms: usize,
    consecutive_small: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize, consecutive_small: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must lie in (0,1), got {rel_tol}"
            )));
        }
        if max_terms == 0 || consecutive_small == 0 {
            return Err(Error::InvalidParameter(
                "max_terms and consecutive_small must be positive".into(),
            ));
        }
        Ok(SeriesControl {
            rel_tol,
            max_terms,
            consecutive_small,
        })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn consecutive_small(&self) -> usize {
        self.consecutive_small
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms.max(1);
        self
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-12,
            max_terms: 10_000,
            consecutive_small: 3,
        }
    }
}

/// Value of a truncated series with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOutcome {
    pub value: f64,
    /// Number of terms summed.
    pub terms: usize,
    /// Magnitude of the last term, a proxy for the neglected tail.
    pub tail: f64,
    /// Sum of absolute values of the terms; `abs_sum / |value|` measures cancellation.
    pub abs_sum: f64,
}

/// Compensated (Neumaier) accumulator implementing the stopping rule.
#[derive(Debug, Clone)]
pub(crate) struct SeriesSum {
    ctl: SeriesControl,
    sum: f64,
    comp: f64,
    abs_sum: f64,
    run: usize,
    terms: usize,
    last: f64,
}

impl SeriesSum {
    pub(crate) fn new(ctl: SeriesControl) -> Self {
        SeriesSum {
            ctl,
            sum: 0.0,
            comp: 0.0,
            abs_sum: 0.0,
            run: 0,
            terms: 0,
            last: 0.0,
        }
    }

    /// Adds a term; returns `true` once the stopping rule is satisfied.
    pub(crate) fn add(&mut self, term: f64) -> bool {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - t) + term;
        } else {
            self.comp += (term - t) + self.sum;
        }
        self.sum = t;
        self.terms += 1;
        self.abs_sum += term.abs();
        self.last = term.abs();
        if term.abs() <= self.ctl.rel_tol * self.value().abs() {
            self.run += 1;
        } else {
            self.run = 0;
        }
        self.run >= self.ctl.consecutive_small
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub(crate) fn terms(&self) -> usize {
        self.terms
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.terms >= self.ctl.max_terms
    }

    pub(crate) fn outcome(&self) -> SeriesOutcome {
        SeriesOutcome {
            value: self.value(),
            terms: self.terms,
            tail: self.last,
            abs_sum: self.abs_sum,
        }
    }

    /// Sums `term(n)` for `n = start, start+1, ...` under the control.
    pub(crate) fn run(
        ctl: SeriesControl,
        op: &'static str,
        start: usize,
        mut term: impl FnMut(usize) -> f64,
    ) -> Result<SeriesOutcome> {
        let mut s = SeriesSum::new(ctl);
        let mut n = start;
        loop {
            if s.add(term(n)) {
                return Ok(s.outcome());
            }
            if s.exhausted() {
                return Err(Error::NonConvergence { op, terms: s.terms() });
            }
            n += 1;
        }
    }
}
