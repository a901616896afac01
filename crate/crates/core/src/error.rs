use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A caller passed arguments that violate an operation's preconditions.
    #[error("invalid input: {0}")]
    Input(String),

    /// Inserting a pair order would close a cycle in a constraint set.
    #[error("constraint cycle: {}", format_cycle(.0))]
    Cycle(Vec<usize>),

    /// A preference file could not be parsed.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The input uses a preference format this crate does not handle.
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    /// The input parsed but is inconsistent with its own metadata.
    #[error("validation error: {0}")]
    Validation(String),

    /// A file could not be read or written.
    #[error("i/o error: {0}")]
    Io(String),

    /// An exhaustive search was refused because the instance is too large.
    #[error("{alternatives} alternatives exceeds the search cap of {cap}; raise the cap explicitly to proceed")]
    CapExceeded { alternatives: usize, cap: usize },
}

fn format_cycle(cycle: &[usize]) -> String {
    cycle
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
