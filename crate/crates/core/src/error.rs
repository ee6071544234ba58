use thiserror::Error;

/// Failure modes of the library.
///
/// The variants map one-to-one onto the CLI exit codes: input problems,
/// internal consistency violations, sampling certificates that could not be
/// obtained, and desk-scale resource caps.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("desk-scale exceeded: {0}")]
    DeskScale(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
