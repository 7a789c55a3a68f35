use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed input: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Core(#[from] fillin_core::Error),
    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),
}

impl CliError {
    /// Exit status: 2 for bad input or usage, 1 for mathematical failures.
    pub fn exit_code(&self) -> i32 {
        use fillin_core::Error as E;
        match self {
            CliError::Core(E::Infeasible(_))
            | CliError::Core(E::MassOutOfRange { .. })
            | CliError::Core(E::NonPositivePotential { .. })
            | CliError::Core(E::NoHorizon(_))
            | CliError::Core(E::DegenerateHorizon(_))
            | CliError::Core(E::Numerical(_)) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
