//! Error types shared by every stage of the cipher.

use std::io;

use thiserror::Error;

/// Failure class, used by the CLI to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Io,
    Format,
    Domain,
}

#[derive(Debug, Error)]
pub enum Error {
    /// A named key parameter lies outside its declared domain.
    #[error("parameter {name} = {value} is out of range: {reason}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("iteration count must be at least 1")]
    EmptyRequest,

    #[error("two S-box seeds share the value {0}")]
    SeedCollision(f64),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("operation code {0} is not one of 0, 1, 2")]
    InvalidOpCode(u8),

    #[error("key file line {line}: {message}")]
    KeyFile { line: usize, message: String },

    #[error(transparent)]
    Pgm(#[from] crate::image_io::PgmError),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io(_) => ErrorClass::Io,
            Error::KeyFile { .. } | Error::Pgm(_) => ErrorClass::Format,
            Error::ParameterDomain { .. }
            | Error::EmptyRequest
            | Error::SeedCollision(_)
            | Error::Dimension(_)
            | Error::InvalidOpCode(_) => ErrorClass::Domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
