use alloc::string::String;

/// Errors raised by the numerical layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// Ensemble or distribution parameters are inconsistent.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// Two inputs that must agree (dimensions, ensembles) do not.
    #[error("mismatch: {0}")]
    Mismatch(String),
    /// An iterative method ran out of iterations.
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(alloc::format!($($arg)*)) };
}
macro_rules! invalid {
    ($($arg:tt)*) => { $crate::error::Error::InvalidParams(alloc::format!($($arg)*)) };
}
pub(crate) use domain;
pub(crate) use invalid;
