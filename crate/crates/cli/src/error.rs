use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, column: usize, message: String },

    #[error("{}: {message}", path.display())]
    Dimension { path: PathBuf, message: String },

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Core(posthoc::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 2,
            CliError::Dimension { .. } | CliError::Core(posthoc::Error::DimensionMismatch(_)) => 3,
            CliError::Scenario(_) | CliError::Core(posthoc::Error::InvalidScenario(_)) => 4,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<posthoc::Error> for CliError {
    fn from(e: posthoc::Error) -> Self {
        match e {
            posthoc::Error::InvalidScenario(msg) => CliError::Scenario(msg),
            other => CliError::Core(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
