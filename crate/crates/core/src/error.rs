use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("game is not zero-sum")]
    NotZeroSum,
    #[error("no consistent outcome assignment: {0}")]
    Convention(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
