use thiserror::Error;

/// Errors raised by the estimators, the streaming accumulator, file I/O and
/// the benchmark harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("need at least two observations (got {got})")]
    TooFewObservations { got: u64 },

    #[error("need at least two periods (unit `{unit_id}` has {got})")]
    TooFewPeriods { unit_id: String, got: usize },

    #[error("empty centering matrix")]
    EmptyCenteringMatrix,

    #[error("{what}: expected length {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("{0} must be at least 1")]
    ZeroDimension(&'static str),

    #[error("cannot merge stream states with different shift vectors")]
    ShiftMismatch,

    #[error("duplicate panel unit `{0}`")]
    DuplicateUnit(String),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for violations of an estimator's domain (too few rows, length
    /// mismatches, ...), as opposed to malformed input or bad flags.
    pub fn is_domain_violation(&self) -> bool {
        !matches!(
            self,
            Error::Parse(_) | Error::Io(_) | Error::InvalidConfig(_)
        )
    }
}
