use std::path::PathBuf;

use qpl_core::collapse::FitError;
use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {msg}")]
    Records { path: PathBuf, msg: String },

    #[error("{failed} of {total} cells failed (first: {first}); completed cells are kept in {checkpoint}")]
    Partial {
        failed: usize,
        total: usize,
        first: String,
        checkpoint: PathBuf,
    },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error(transparent)]
    Core(#[from] qpl_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn records(path: impl Into<PathBuf>, msg: impl Into<String>) -> Self {
        CliError::Records { path: path.into(), msg: msg.into() }
    }

    /// Process exit status: 2 for bad input, 3 for an incomplete sweep, 4
    /// when a fit could not be produced.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } | CliError::Records { .. } | CliError::Core(_) => 2,
            CliError::Partial { .. } => 3,
            CliError::Fit(_) => 4,
        }
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        CliError::Fit(e.to_string())
    }
}
