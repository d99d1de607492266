use thiserror::Error;

/// Errors raised by lattice, orderization and checker operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An element was handed to a lattice it does not belong to.
    #[error("element {0} does not belong to this lattice")]
    ForeignElement(String),

    /// Primal and dual forms of a lattice polynomial disagreed, or an
    /// exhaustive scan found a triple breaking distributivity.
    #[error("distributivity violated at triple ({0})")]
    DistributivityViolation(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unbound variable {0}")]
    Binding(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Parse failure; `pos` is a 1-based character offset.
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
