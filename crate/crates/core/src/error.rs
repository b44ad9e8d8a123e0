//! Error type shared by all core operations.

use thiserror::Error;

/// Errors produced by the core algebra, simulator and problem modules.
#[derive(Debug, Error)]
pub enum CoreError {
    /// Operands defined over different qubit counts.
    #[error("qubit count mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },

    /// A precondition on the input was violated.
    #[error("invalid input: {0}")]
    Input(String),

    /// The requested computation exceeds a documented size limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A numerical procedure failed to converge or produced non-finite values.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The operation does not support this input class.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Underlying I/O failure (file formats, manifests).
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON in an external file.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CoreError {
    pub fn input(msg: impl Into<String>) -> Self {
        CoreError::Input(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        CoreError::Capacity(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        CoreError::Numeric(msg.into())
    }

    /// Process exit code used by the command-line tools for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CoreError::Capacity(_) => 3,
            CoreError::Numeric(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
