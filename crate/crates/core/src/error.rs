use thiserror::Error;

/// Errors shared by every solver, oracle and generator in the crate.
///
/// The variants map one-to-one onto the CLI exit codes: input-type errors
/// (including parse failures and disconnected graphs) exit with 2,
/// infeasibility with 3 and capacity overruns with 4.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn infeasible(msg: impl Into<String>) -> Self {
        Error::Infeasible(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
