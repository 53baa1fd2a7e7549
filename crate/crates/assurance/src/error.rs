use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Domain(#[from] assurance_core::Error),

    #[error("trials must be at least 1")]
    NoTrials,

    #[error("{size} additional samples exceeds the enumeration limit of {limit}")]
    EnumerationTooLarge { size: u64, limit: u64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
