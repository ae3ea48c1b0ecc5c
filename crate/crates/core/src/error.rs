use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported length {0}: circulant operators must have odd length")]
    UnsupportedLength(usize),

    /// A numerical result violated a property that holds in exact arithmetic.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("model construction failed: {0}")]
    ModelConstruction(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("replicate {index} failed: {source}")]
    Replicate {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short stable tag used in machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::UnsupportedLength(_) => "unsupported-length",
            Error::InternalConsistency(_) => "internal-consistency",
            Error::ModelConstruction(_) => "model-construction",
            Error::ResourceLimit(_) => "resource-limit",
            Error::DegenerateSample(_) => "degenerate-sample",
            Error::InsufficientData(_) => "insufficient-data",
            Error::Replicate { .. } => "replicate",
            Error::Io { .. } => "io",
        }
    }
}
