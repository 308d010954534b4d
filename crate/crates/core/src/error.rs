use thiserror::Error;

/// Errors raised by the kernel, its ingredients and the verification suites.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeatError {
    #[error("domain error: {0}")]
    Domain(String),

    /// The value is finite mathematically but not representable; `ln_value`
    /// is its natural logarithm.
    #[error("overflow: value exceeds double precision (ln value = {ln_value})")]
    Overflow { ln_value: f64 },

    #[error(
        "quadrature did not converge within {subdivisions} subdivisions (error estimate {error_estimate:e})"
    )]
    Quadrature {
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, HeatError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(HeatError::Domain(msg.into()))
}
