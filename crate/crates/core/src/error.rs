use thiserror::Error;

/// Errors produced anywhere in the simulation / certification pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("wrong table variant: expected {expected}, got {got}")]
    WrongVariant {
        expected: &'static str,
        got: &'static str,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("constraint set is infeasible: {0}")]
    Infeasible(String),

    #[error("optimizer did not converge: {message}")]
    NonConvergence { message: String, trace: Vec<f64> },

    #[error("oracle inconsistency: {0}")]
    Inconsistent(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
