use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar parameter lies outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Field shapes, grids or component counts do not match.
    #[error("shape error: {0}")]
    Shape(String),
    /// Input data is unusable (non-finite values, too few samples, ...).
    #[error("data error: {0}")]
    Data(String),
    /// The density left the admissible region.
    #[error("vacuum error: minimum density {min} not above threshold {threshold}")]
    Vacuum { min: f64, threshold: f64 },
    /// The requested operation does not exist for this configuration.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A configuration key failed validation.
    #[error("{key}: {message}")]
    Config { key: String, message: String },
    /// An invariant that the construction should guarantee was broken.
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}
