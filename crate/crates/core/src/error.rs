//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A function spec cannot supply the requested derivative order.
    #[error("capability error: {0}")]
    Capability(String),

    /// Adaptive quadrature ran out of subdivisions before reaching tolerance.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// An integrand or grid function evaluated to a non-finite value.
    #[error("non-finite evaluation at t = {point}")]
    NonFinite { point: f64 },

    /// A config document referenced a corpus label that does not exist.
    #[error("unknown function label: {0}")]
    UnknownLabel(String),

    /// A config document failed schema or semantic validation.
    #[error("config error: {0}")]
    Config(String),

    /// The config document is not well-formed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
