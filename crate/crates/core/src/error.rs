use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("unsupported characteristic: {0}")]
    UnsupportedCharacteristic(String),
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not triangular: {0}")]
    NotTriangular(String),
    #[error("congruence obstruction: {0}")]
    Congruence(String),
    #[error("no case applies: {0}")]
    NoCase(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
