//! Commands behind the `freeconv` binary. Each returns the text to print so
//! the binary stays a thin argument-parsing shell.

pub mod commands;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    Numerical(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 0 success, 1 verification failure, 2 input error, 3 non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<freeconv::Error> for CliError {
    fn from(e: freeconv::Error) -> Self {
        match e {
            freeconv::Error::EigenNonConvergence { .. } | freeconv::Error::QuadratureNonConvergence { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
