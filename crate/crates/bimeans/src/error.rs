//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Mean arguments must be positive, finite reals.
    #[error("invalid argument pair: a={a}, b={b} (both must be positive and finite)")]
    InvalidPair { a: f64, b: f64 },

    /// A family parameter fell outside its domain.
    #[error("parameter out of domain for {family}: {detail}")]
    ParamDomain { family: &'static str, detail: String },

    /// A point was handed to a claim whose hypothesis it does not satisfy.
    #[error("point does not satisfy the hypothesis of claim {0}")]
    HypothesisViolated(String),

    /// A search or grid configuration is malformed.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A finite-difference stencil would leave the parameter domain.
    #[error("finite-difference stencil leaves the domain: {0}")]
    Stencil(String),
}

pub type Result<T> = std::result::Result<T, Error>;
