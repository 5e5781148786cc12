use std::io;

/// Harness-level error. `exit_code` maps each variant onto the CLI's
/// documented exit codes (1 = invalid configuration, 2 = numerical or I/O
/// failure; the tails-check failure code 3 is not an error, it is a verdict).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("calibration unavailable: {0}")]
    Calibration(String),

    #[error("malformed table: {0}")]
    Parse(String),

    #[error(transparent)]
    Core(#[from] mccsim_core::Error),

    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// CLI exit code for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) | Error::Parse(_) => 1,
            Error::Core(mccsim_core::Error::InvalidParameter(_)) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
