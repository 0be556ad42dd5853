use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Array or grid sizes do not agree.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid or inconsistent run configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A non-finite coefficient appeared while time stepping.
    #[error("numerical blow-up at step {step}")]
    BlowUp { step: usize },

    /// The exponent pair is not admissible for the Strichartz diagnostic.
    #[error("exponent pair (p, q) = ({p}, {q}) is not admissible")]
    Admissibility { p: f64, q: f64 },

    /// Not enough usable data for a least-squares order fit.
    #[error("order fit needs at least 2 positive errors, got {0}")]
    Fit(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }
}
