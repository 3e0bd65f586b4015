use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    GroupSpec(String),
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coweight must be dominant: {0}")]
    NotDominant(String),
    #[error("{mu_prime} is not <= {mu} in the dominance order")]
    NotComparable { mu_prime: String, mu: String },
    #[error("datum has no roots (torus only)")]
    TorusOnly,
    #[error("singular matrix over F_q((u))")]
    Singular,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
