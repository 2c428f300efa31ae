use std::path::PathBuf;

use thiserror::Error;

use crate::specfile::SpecError;

/// Everything that stops a command, mapped onto the process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("input is not valid UTF-8")]
    Encoding,

    #[error(transparent)]
    Spec(#[from] SpecError),

    #[error("precision m is not given; add an `m` line or pass --m")]
    MissingPrecision,

    #[error(transparent)]
    Core(#[from] cmprep_core::Error),

    #[error("verification failed at {stage}: {detail}")]
    Verification { stage: String, detail: String },
}

impl CliError {
    /// 1 for failed verification, 3 for exceeding the memory cap and 2 for
    /// everything else (malformed or invalid input).
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification { .. } => 1,
            CliError::Core(cmprep_core::Error::Capacity { .. }) => 3,
            _ => 2,
        }
    }
}
