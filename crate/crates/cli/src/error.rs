use std::path::{Path, PathBuf};
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: lifestyle_core::Error,
    },

    #[error(transparent)]
    Core(#[from] lifestyle_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("validation failed:\n{}", .0.join("\n"))]
    Violations(Vec<String>),

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn parse(path: &Path, source: impl Into<lifestyle_core::Error>) -> Self {
        CliError::Parse {
            path: path.to_path_buf(),
            source: source.into(),
        }
    }

    /// 2 for bad input, 1 for failures of the tool itself.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Write { .. } | CliError::Output(_) => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
