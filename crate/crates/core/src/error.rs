use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Objects from different rings or with mismatched shapes were combined.
    #[error("structural error: {0}")]
    Structural(String),
    /// The input lies outside what the engine decides (inhomogeneous data, non-domain base, ...).
    #[error("unsupported input: {0}")]
    Unsupported(String),
    /// The operation is undefined on this input (for example depth of the zero module).
    #[error("undefined: {0}")]
    Undefined(String),
    /// An index beyond what was computed was requested.
    #[error("out of range: {0}")]
    Range(String),
    /// An internal identity failed; this signals a bug in the engine.
    #[error("internal consistency error: {0}")]
    Internal(String),
    /// Malformed polynomial or ring text.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
