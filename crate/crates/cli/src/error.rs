use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error("kind {kind} does not support the field of discriminant {disc}")]
    Unsupported { kind: String, disc: i64 },
    #[error("cache entry {path} is corrupt: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },
    #[error(transparent)]
    Compute(#[from] cubelab::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("report encoding: {0}")]
    Encode(String),
}

impl CliError {
    /// 1 is reserved for failed checks, 2 for usage errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::InvalidSpec(_) => 2,
            CliError::Unsupported { .. } => 3,
            CliError::Compute(cubelab::Error::UnsupportedField(_)) => 3,
            CliError::CacheCorrupt { .. } => 4,
            CliError::Compute(_) => 5,
            CliError::Io(_) | CliError::Encode(_) => 6,
        }
    }
}
