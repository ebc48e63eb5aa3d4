use std::fmt;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    Domain(String),
    /// A series or iteration failed to reach the requested tolerance
    /// before hitting its term cap.
    Convergence(String),
    /// An intermediate value exceeded the representable range.
    Overflow(String),
    /// The operation is undefined at a degenerate parameter point.
    Degenerate(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Convergence(msg) => write!(f, "convergence error: {msg}"),
            Error::Overflow(msg) => write!(f, "overflow: {msg}"),
            Error::Degenerate(msg) => write!(f, "degenerate: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
