use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation (bad qubit index,
    /// repeated support, k > n, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An experiment or sweep configuration is inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A numerical computation produced an unusable value.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Fit(#[from] crate::collapse::FitError),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
