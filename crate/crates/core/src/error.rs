use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants are grouped by the process exit code the command-line driver maps
/// them to (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    /// A catalog or system file violates a structural invariant.
    #[error("invalid {location}: {message}")]
    Validation { location: String, message: String },

    #[error("memory `{memory}` has no eligible compiler (kind {kind}, {ports} port(s), {words}x{bits})")]
    NoEligibleCompiler {
        memory: String,
        kind: String,
        ports: u32,
        words: u64,
        bits: u64,
    },

    /// A caller broke an operation's precondition.
    #[error("{0}")]
    InvalidInput(String),

    #[error("estimator batch {batch_id} failed: {message}")]
    Backend { batch_id: u64, message: String },

    #[error("{what} needs {required} combinations, above the cap of {cap}")]
    Capacity {
        what: String,
        required: u128,
        cap: u128,
    },
}

impl Error {
    pub(crate) fn validation(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidInput(message.into())
    }

    /// Stable process exit code: 1 input/validation, 2 backend, 3 capacity.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Backend { .. } => 2,
            Error::Capacity { .. } => 3,
            _ => 1,
        }
    }
}
