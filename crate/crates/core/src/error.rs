use thiserror::Error;

/// Errors raised by kernel evaluation, factorization and simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain mismatch: {family} kernel expects {expected} points, got {got}")]
    DomainMismatch {
        family: &'static str,
        expected: &'static str,
        got: String,
    },

    #[error("point outside kernel domain: {0}")]
    OutOfDomain(String),

    #[error("duplicate point: index {first} repeats at index {second}")]
    DuplicatePoint { first: usize, second: usize },

    #[error("matrix is not positive definite: pivot {pivot:e} at row {row}")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("matrix is singular (pivot {pivot:e} at row {row})")]
    Singular { row: usize, pivot: f64 },

    #[error("points must be strictly increasing (violated at index {0})")]
    NotIncreasing(usize),

    #[error("set is not a union of partition cells: {0}")]
    CellMisalignment(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("ensemble has no paths")]
    EmptyEnsemble,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures that come from the numbers rather than the caller's
    /// input shape: indefinite or singular matrices.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. } | Error::Singular { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
