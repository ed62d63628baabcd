use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad caller-supplied argument (counts, thresholds, parameters).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Run configuration problems: unreadable config, unknown attribute, missing path.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("file not found: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("{path}: line {line}: {message}")]
    Malformed {
        path: String,
        line: u64,
        message: String,
    },

    #[error("duplicate article id `{0}`")]
    DuplicateId(String),

    /// The data cannot support the requested computation.
    #[error("data error: {0}")]
    Data(String),

    #[error("modularity undefined: network has zero total edge weight")]
    ZeroWeight,

    /// An internal consistency invariant was violated.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 2 for usage/config errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::MissingFile(_) => 2,
            _ => 1,
        }
    }
}
