use std::path::Path;
use std::process::ExitCode;

use ou_levy_core::{Error as CoreError, SeriesVerdict};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("precondition failed: {message}")]
    Precondition {
        message: String,
        verdict: Option<SeriesVerdict>,
    },
    #[error("self-check failed: {0}")]
    SelfCheck(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 2,
            CliError::Precondition { .. } => 3,
            CliError::SelfCheck(_) => 4,
            CliError::Io { .. } | CliError::Other(_) => 1,
        })
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::CameronMartinDivergent(v) => CliError::Precondition {
                message: CoreError::CameronMartinDivergent(v.clone()).to_string(),
                verdict: Some(v),
            },
            CoreError::Precondition(m) => CliError::Precondition {
                message: m,
                verdict: None,
            },
            other => CliError::Config(other.to_string()),
        }
    }
}
