use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("exhaustive search over {got} {what} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
