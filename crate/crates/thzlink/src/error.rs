//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by constructors, runners, and file-backed operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its physically meaningful range.
    #[error("invalid parameter {name}: {reason} (got {value})")]
    InvalidParameter {
        /// Name of the offending parameter.
        name: &'static str,
        /// Why the value is rejected.
        reason: &'static str,
        /// The rejected value, rendered for the message.
        value: String,
    },

    /// A run configuration failed structural validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An input slice had an incompatible length.
    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    /// A computation produced a non-finite value.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Config file parsing failed.
    #[error("config parse error: {0}")]
    ConfigParse(String),

    /// Filesystem I/O failed.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// CSV encoding failed.
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Convenience constructor for [`Error::InvalidParameter`].
    pub fn invalid(name: &'static str, reason: &'static str, value: impl std::fmt::Display) -> Self {
        Error::InvalidParameter {
            name,
            reason,
            value: value.to_string(),
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
