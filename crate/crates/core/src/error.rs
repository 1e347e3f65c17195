use thiserror::Error;

/// Errors produced by the scoring pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid dataset: {0}")]
    InvalidData(String),

    #[error("non-finite value at point {point}, coordinate {coord}")]
    NonFinite { point: usize, coord: usize },

    #[error("labels are required for this operation")]
    MissingLabels,

    #[error("AUC is undefined: labels contain only {0} points")]
    SingleClass(&'static str),

    #[error("threshold tau = {0} must exceed 1: scores of points inside a homogeneous region concentrate at 1, so tau <= 1 flags ordinary points")]
    ThresholdTooLow(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
