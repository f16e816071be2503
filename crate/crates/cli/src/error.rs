use std::io;
use std::path::Path;
use std::process::ExitCode;

use sharpslit_core::formats::FormatError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } => 4,
        })
    }
}

impl From<sharpslit_core::Error> for CliError {
    fn from(e: sharpslit_core::Error) -> Self {
        match e {
            sharpslit_core::Error::Numeric { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub fn from_format(path: &Path, e: FormatError) -> CliError {
    match e {
        FormatError::Io(source) => CliError::io(path, source),
        FormatError::Parse { .. } => CliError::Validation(format!("{}: {e}", path.display())),
        FormatError::Invalid(inner) => inner.into(),
    }
}
