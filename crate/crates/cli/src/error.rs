use std::process::ExitCode;

use thiserror::Error;

/// Failure classes of a run, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(hspec_core::Error),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        })
    }
}

impl From<hspec_core::Error> for CliError {
    fn from(e: hspec_core::Error) -> Self {
        match e {
            hspec_core::Error::InvalidParams(msg) => CliError::Validation(msg),
            other => CliError::Numerical(other),
        }
    }
}
