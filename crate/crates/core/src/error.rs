use core::fmt;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: bad tour, out-of-range vertex, wrong subset size.
    InvalidInput(&'static str),
    /// An exact oracle was asked for more vertices than it supports.
    Capacity { requested: usize, limit: usize },
    /// An internal consistency check failed.
    InvariantViolation(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Capacity { requested, limit } => {
                write!(f, "capacity exceeded: {requested} vertices requested, limit is {limit}")
            }
            Error::InvariantViolation(msg) => write!(f, "invariant violation: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
