//! Crate-wide error type.

/// Errors produced by construction, analysis, and I/O operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or inconsistent input values (bad probabilities, mismatched
    /// labels, out-of-range parameters, unparsable files, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// A coordinate index outside `1..=n`.
    #[error("coordinate index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    /// A parameter conversion that is undefined at the given arguments.
    #[error("undefined conversion: {0}")]
    UndefinedConversion(String),

    /// A posterior conditioned on a transcript with zero marginal probability.
    #[error("undefined posterior: transcript {transcript:?} has zero marginal probability under the prior")]
    UndefinedPosterior { transcript: String },

    /// An operation that would require enumerating a space beyond the cap,
    /// or a representation that does not support the request.
    #[error("capability exceeded: {0}")]
    Capability(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for an [`Error::Input`] with a formatted message.
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
