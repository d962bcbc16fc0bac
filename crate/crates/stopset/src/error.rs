//! Error type shared by every module of the crate.
//!
//! Three failure classes are distinguished because callers react to them
//! differently: malformed *input text* (reject with a location), arguments
//! outside a function's *domain* (reject with an explanation), and inputs
//! that are well-formed but exceed a *resource cap* (refuse rather than
//! thrash).  Internal arithmetic invariants (e.g. a division that must be
//! exact) are asserted, not reported: their failure means the code is wrong.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input text is malformed.  `line` is 1-based and names the first
    /// offending line.
    #[error("format error on line {line}: {msg}")]
    Format { line: usize, msg: String },

    /// An argument lies outside the documented domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The input is valid but exceeds a hard resource cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

impl Error {
    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
