use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Arguments outside the region where a representation is valid.
    #[error("{op}: argument outside the domain ({detail})")]
    Domain { op: &'static str, detail: String },

    /// A series or iteration hit its term budget before the stopping rule fired.
    #[error("{op}: no convergence within {terms} terms")]
    NonConvergence { op: &'static str, terms: usize },

    /// An exact closed form that must be an integer was not.
    #[error("closed form for t({n},{k}) is not an integer: {value}")]
    Integrality { n: usize, k: usize, value: String },

    /// The renewal kernel became non-finite on the time grid.
    #[error("kernel derivative is not finite at t = {t}")]
    SingularKernel { t: f64 },

    /// A simulated level exceeded the representable cap.
    #[error("level on ray {ray} exceeded {cap} at time {time}")]
    LevelOverflow { ray: u32, time: f64, cap: u64 },

    /// Constructor-level validation failure.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        op,
        detail: detail.into(),
    }
}
