use thiserror::Error;

/// Errors raised by the fidelity kernels and the model solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("numeric failure in {context} after {iterations} iterations (residual {residual:e})")]
    NumericFailure {
        context: String,
        iterations: usize,
        residual: f64,
    },

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("precision limit: integration cutoff {required:e} exceeds cap {cap:e}; use a larger tolerance")]
    PrecisionLimit { required: f64, cap: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
