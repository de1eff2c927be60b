use std::io;

use hyperwalk_core::Error as CoreError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const GENERATION: i32 = 2;
    pub const BAD_INSTANCE: i32 = 3;
    pub const DETERMINISTIC: i32 = 4;
    pub const STATISTICAL: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("generation failed: {0}")]
    Generation(CoreError),

    #[error("bad instance: {0}")]
    BadInstance(CoreError),

    #[error("bad file: {0}")]
    BadFile(String),

    #[error("deterministic check failed: {0}")]
    Deterministic(String),

    #[error("statistical check failed: {0}")]
    Statistical(String),

    #[error("io: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => exit::USAGE,
            CliError::Generation(_) => exit::GENERATION,
            CliError::BadInstance(_) | CliError::BadFile(_) => exit::BAD_INSTANCE,
            CliError::Deterministic(_) => exit::DETERMINISTIC,
            CliError::Statistical(_) => exit::STATISTICAL,
        }
    }
}
