use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("spin values must be -1 or +1, found {0}")]
    InvalidSpin(i64),

    #[error("loop placement saturated: placed {placed} of {requested} {kind} loops after {attempts} attempts")]
    Saturated {
        kind: &'static str,
        placed: usize,
        requested: usize,
        attempts: usize,
    },

    #[error("brute-force enumeration over {size} spins exceeds the budget of {budget}")]
    EnumerationBudget { size: usize, budget: usize },

    #[error("frustration index is undefined: {0}")]
    UndefinedFrustration(&'static str),

    #[error("weight {weight} rounds to zero at scale {scale}")]
    LossyScale { weight: f64, scale: u64 },

    #[error("malformed wcnf at line {line}: {message}")]
    Wcnf { line: usize, message: String },

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// Short machine-readable tag, used by the CLI error record.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::InvalidSpin(_) => "invalid_spin",
            Error::Saturated { .. } => "saturated",
            Error::EnumerationBudget { .. } => "enumeration_budget",
            Error::UndefinedFrustration(_) => "undefined_frustration",
            Error::LossyScale { .. } => "lossy_scale",
            Error::Wcnf { .. } => "malformed_wcnf",
            Error::InsufficientSamples { .. } => "insufficient_samples",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
