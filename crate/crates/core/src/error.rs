use thiserror::Error;

/// Errors raised by the engine.
///
/// The variants line up with the CLI exit codes: input problems map to 4,
/// resource caps to 3, everything else is a hard failure.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
