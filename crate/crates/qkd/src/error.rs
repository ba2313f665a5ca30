use thiserror::Error;

/// Errors shared across the whole pipeline.
#[derive(Debug, Error)]
pub enum QkdError {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("validation error ({invariant}): offending magnitude {magnitude:.3e}")]
    Validation { invariant: String, magnitude: f64 },

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("entanglement not detected: {0}")]
    NotDetected(String),

    #[error("undefined weak value: post-selection probability {0:.3e}")]
    UndefinedWeakValue(f64),

    #[error("reconstruction error: {0}")]
    Reconstruction(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl QkdError {
    pub fn validation(invariant: &str, magnitude: f64) -> Self {
        QkdError::Validation {
            invariant: invariant.to_string(),
            magnitude,
        }
    }
}

pub type Result<T> = std::result::Result<T, QkdError>;
