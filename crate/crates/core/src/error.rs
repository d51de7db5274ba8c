use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method did not reach its tolerance.
    #[error("{method} did not converge after {iterations} iterations")]
    Convergence {
        method: &'static str,
        iterations: usize,
    },

    /// Adaptive quadrature hit its depth limit; `estimate` is the best value reached.
    #[error("quadrature exceeded maximum depth {max_depth} (best estimate {estimate:e})")]
    Quadrature { max_depth: u32, estimate: f64 },

    #[error("cannot normalise: {0}")]
    Normalization(String),

    /// The credible count quantile does not exceed the background offset, so
    /// no positive upper limit on λ exists.
    #[error("no positive limit: count quantile {lambda_bar_c} <= background offset {threshold}")]
    NoPositiveLimit { lambda_bar_c: f64, threshold: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
