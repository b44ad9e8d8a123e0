//! Error type for the learning crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Core(#[from] mixgen_core::CoreError),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl LearnError {
    /// Process exit code used by the command-line tools for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            LearnError::Core(e) => e.exit_code(),
            LearnError::Numeric(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, LearnError>;
