use std::io;

use optpred_core::Error as CoreError;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    /// Process exit code: 1 for rejected input, 2 for numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}
