use thiserror::Error;

/// Errors produced by the wavelet solver and its supporting numerics.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("singular point: {0}")]
    Singularity(String),

    #[error("order {order} at (x={x}, t={t}) is outside the bracket ({}, {q}]", *q as f64 - 1.0)]
    OrderBracket { order: f64, q: u32, x: f64, t: f64 },

    #[error("no built-in example with id {0} (expected 1..=4)")]
    NotFound(u32),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("singular system: pivot {pivot} has magnitude {magnitude:e} below threshold {threshold:e}")]
    SingularSystem {
        pivot: usize,
        magnitude: f64,
        threshold: f64,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
