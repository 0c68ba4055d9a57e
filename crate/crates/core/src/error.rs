use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A sampling grid too coarse for the requested quantity.
    #[error("under-resolved: {0}")]
    Resolution(String),
    /// A state violating a structural constraint (e.g. nonzero low modes).
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
