use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("distribution must have at least one outcome")]
    EmptyDistribution,

    #[error("probability at index {index} is {value}, outside [0, 1]")]
    InvalidProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, more than {tolerance} away from 1")]
    ProbabilitySum { sum: f64, tolerance: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Shrinkage below three components is inadmissible-territory misuse;
    /// callers must fail loudly rather than silently pass data through.
    #[error("James-Stein shrinkage requires three or more components, got {n}")]
    TooFewComponents { n: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("duplicate measurement label `{0}`")]
    DuplicateLabel(String),

    #[error("entropy value {0} must be finite and nonnegative")]
    InvalidEntropyValue(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid measurement basis `{label}`: {reason}")]
    InvalidBasis { label: String, reason: String },

    #[error("invalid state vector: {0}")]
    InvalidStateVector(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
