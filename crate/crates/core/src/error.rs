use thiserror::Error;

pub type Result<T> = std::result::Result<T, RinarError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RinarError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate variance: {0}")]
    DegenerateVariance(String),

    #[error("singular system: {matrix} has pivot {pivot:e} at step {step}")]
    SingularSystem {
        matrix: &'static str,
        step: usize,
        pivot: f64,
    },

    #[error("non-stationary parameters: sum of |alpha_j| = {abs_sum} is not < 1")]
    NonStationary { abs_sum: f64 },

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("all {reps} replications failed; first error: {first}")]
    AllReplicationsFailed { reps: usize, first: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for RinarError {
    fn from(e: std::io::Error) -> Self {
        RinarError::Io(e.to_string())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> RinarError {
    RinarError::InvalidArgument(msg.into())
}
