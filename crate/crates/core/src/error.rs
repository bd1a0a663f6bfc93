use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("coefficient has a pole at t = {0}")]
    Pole(String),

    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("point is not fixed by the iterate: {0}")]
    NotFixed(String),

    #[error("point is not periodic within {0} iterates")]
    NotPeriodic(u64),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("not supported: {0}")]
    Unsupported(String),
}
