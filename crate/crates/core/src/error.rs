use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimension {dim} exceeds the ray-enumeration limit of {limit}")]
    DimensionLimit { dim: usize, limit: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("outcome labels do not match: {0}")]
    LabelMismatch(String),

    #[error("observables live on different state spaces: {0}")]
    MixedSpaces(String),

    #[error("zero effect is not allowed here")]
    ZeroEffect,

    #[error("solver stopped after {iterations} iterations without converging")]
    IterationLimit { iterations: usize },

    #[error("value has no exact representation: {0}")]
    Irrational(String),

    #[error("hypothesis of the constructive simulation does not hold: {0}")]
    HypothesisFailed(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("observable is not simulable from the given simulators")]
    NotSimulable,

    #[error("certificate failed to replay: {0}")]
    CertificateRejected(String),
}
