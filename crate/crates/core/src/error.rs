//! Error type shared by all operations.

use std::fmt;
use std::io;

/// Errors produced by factorizations, kernels, and file I/O.
#[derive(Debug)]
pub enum Error {
    /// Operand dimensions are incompatible.
    Shape(String),
    /// A split point, pivot offset, or index is out of range.
    Bounds(String),
    /// An argument is outside the operation's domain (e.g. an empty vector).
    Domain(String),
    /// A zero pivot or zero triangular diagonal was encountered at the given
    /// step (diagonal index).
    Singular {
        step: usize,
    },
    /// The pivot column at the given step is entirely zero, so the columns of
    /// the input are linearly dependent.
    RankDeficient {
        step: usize,
    },
    /// A text file did not match the expected format.
    Parse(String),
    Io(io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Error::Bounds(msg) => write!(f, "out of bounds: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Singular { step } => write!(f, "singular pivot at step {step}"),
            Error::RankDeficient { step } => {
                write!(f, "rank deficiency detected at column {step}")
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(err: io::Error) -> Self {
        Error::Io(err)
    }
}
