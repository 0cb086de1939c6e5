use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("model validation failed: {0}")]
    Validation(String),

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("degenerate objective: {0}")]
    Degenerate(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// CLI process exit code buckets: 2 validation, 3 numeric, 4 usage.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_)
            | Error::DimensionMismatch(_)
            | Error::NotPositiveDefinite(_)
            | Error::Validation(_)
            | Error::UnsupportedModel(_)
            | Error::Range(_) => 2,
            Error::Numeric(_) | Error::Degenerate(_) => 3,
            Error::Io(_) | Error::Json(_) => 4,
        }
    }
}
