use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric input outside the domain of the operation (NaN, infinity).
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter failed validation. `key` is the configuration key users type.
    #[error("invalid `{key}`: {reason}")]
    InvalidParam { key: String, reason: String },

    /// The caller violated an operation precondition.
    #[error("{0}")]
    Usage(String),

    #[error("simulation diverged at step {step}: non-finite agent state")]
    Diverged { step: usize },

    #[error("could not place a connected, non-overlapping swarm after {attempts} attempts")]
    InfeasibleInit { attempts: usize },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            key: key.into(),
            reason: reason.into(),
        }
    }
}
