use thiserror::Error;

/// Errors raised by evaluation, transformation and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("invalid base: |q| = {modulus} must be below 1 - {margin}")]
    InvalidBase { modulus: f64, margin: f64 },

    #[error("parameter `{slot}` must be nonzero")]
    ZeroEntry { slot: &'static str },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("forbidden lower parameter: c = {re}{im:+}i satisfies c q^N = 1 for some N >= 0")]
    ForbiddenLowerParameter { re: f64, im: f64 },

    #[error("tolerance {tol:e} not reached within {limit} terms")]
    NonConvergentTolerance { tol: f64, limit: usize },

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, QError>;
