use thiserror::Error;

/// Errors raised by the numerical layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid model parameters: {0}")]
    Validation(String),

    #[error("p = {p} exceeds q + 1 = {}; the defining series has zero radius", q + 1)]
    ZeroRadius { p: usize, q: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("series diverges: |x| = {modulus} is not inside the radius {radius}")]
    Divergence { modulus: f64, radius: f64 },

    #[error("series did not reach the requested tolerance within {terms} terms")]
    Convergence { terms: usize },

    #[error("quadrature did not converge: estimated error {error:e} after {intervals} subintervals")]
    Quadrature { error: f64, intervals: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("level {level} exceeds truncation {trunc}")]
    Truncation { level: usize, trunc: usize },

    #[error("no elementary quadrature kernel for (p, q) = ({p}, {q})")]
    UnsupportedKernel { p: usize, q: usize },
}

impl Error {
    /// Input or parameter problems, as opposed to numerical failures.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Validation(_) | Error::ZeroRadius { .. } | Error::Parse(_) | Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
