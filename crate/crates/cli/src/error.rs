use std::path::PathBuf;

use harmonia::HarmoniaError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Harmonia(#[from] HarmoniaError),
    #[error("{0}")]
    Parse(String),
    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("unknown {what} {name:?}; expected one of {expected}")]
    Unknown { what: &'static str, name: String, expected: &'static str },
}

impl CliError {
    /// Stable machine-readable tag for error reports.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Harmonia(HarmoniaError::NoGreenKernel(_)) => "no_green_kernel",
            CliError::Harmonia(HarmoniaError::UnknownKind(_)) => "unknown_kind",
            CliError::Harmonia(HarmoniaError::InvalidParameters(_)) => "invalid_parameters",
            CliError::Harmonia(HarmoniaError::Domain(_)) => "domain",
            CliError::Harmonia(_) => "numerical",
            CliError::Parse(_) => "parse",
            CliError::Config { .. } => "config",
            CliError::Io { .. } => "io",
            CliError::Unknown { .. } => "unknown",
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
