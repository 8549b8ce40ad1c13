use thiserror::Error;

/// Errors raised by the numerical kernels and the simulation layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature exhausted its budget before reaching the requested tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    Accuracy { estimate: f64, error_bound: f64 },

    /// Requested correlation is not attainable for the given marginals.
    #[error("correlation {rho} infeasible for marginals ({p1}, {p2}); admissible interval [{lo:.6}, {hi:.6}]")]
    Infeasible {
        rho: f64,
        p1: f64,
        p2: f64,
        lo: f64,
        hi: f64,
    },

    /// A configuration value violates its invariant.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A numerically derived quantity failed a consistency check.
    #[error("numerical integrity check failed: {0}")]
    Integrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
