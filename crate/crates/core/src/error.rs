use std::path::PathBuf;

/// Errors raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A shape with zero or negative extent, or too few vertices.
    #[error("degenerate shape: {0}")]
    DegenerateShape(String),

    /// A state outside the regime where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid scenario or parameter, naming the offending field.
    #[error("invalid `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("failed to parse {}: {message}", path.display())]
    Parse { path: PathBuf, message: String },

    #[error("numeric failure at step {step}: {message}")]
    Numeric { step: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
