//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad arguments: out-of-range orders, empty grids, unknown names.
    #[error("usage: {0}")]
    Usage(String),

    /// Input outside the mathematical domain (e.g. negative ordinate to invert).
    #[error("domain: {0}")]
    Domain(String),

    /// Non-finite intermediate, failed bracketing, or an untrustworthy grid sup.
    #[error("numeric: {0}")]
    Numeric(String),

    /// Series index cap reached before the truncation target was met.
    /// Carries the mass collected so far so the caller can retry with a looser policy.
    #[error("truncation: k_max={k_max} reached with collected mass {collected_mass}")]
    Truncation { collected_mass: f64, k_max: usize },

    /// A declared precondition failed on data actually seen (e.g. growth bound).
    #[error("contract: {0}")]
    Contract(String),

    /// A quantity certified by the closed forms violated its bound — a regression.
    #[error("bound regression: {0}")]
    BoundRegression(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code per the CLI contract: 2 usage, 3 numeric trouble.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Domain(_) => 2,
            _ => 3,
        }
    }
}
