//! Crate-wide error type.
//!
//! Variants map onto the failure classes the operations distinguish:
//! bad construction inputs, out-of-range math parameters, violated
//! analytic preconditions, under-resolved grids, and goals that the
//! discrete grid provably cannot meet.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid construction input (grid sizes, config blocks, mismatched grids).
    #[error("configuration error: {0}")]
    Config(String),

    /// Parameter outside the mathematically supported range.
    #[error("domain error: {0}")]
    Domain(String),

    /// An analytic precondition of an operation does not hold for the input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The grid or snapshot density cannot resolve the requested quantity.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// The requested bound is unreachable on this grid; carries the achievable floor.
    #[error("infeasible: {message} (floor = {floor:.3e})")]
    Infeasible { message: String, floor: f64 },

    /// A run was stopped by a guard; partial results were discarded by the caller.
    #[error("evolution aborted: {0}")]
    Aborted(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
    pub fn resolution(msg: impl Into<String>) -> Self {
        Error::Resolution(msg.into())
    }
}
