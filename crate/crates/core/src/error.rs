use num_complex::Complex64;
use thiserror::Error;

use crate::verify::QuadratureResult;

pub type Result<T> = std::result::Result<T, CheeseError>;

#[derive(Debug, Error)]
pub enum CheeseError {
    #[error("pole: {0}")]
    Pole(String),

    #[error("domain: {0}")]
    Domain(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("budget violated: {0}")]
    Budget(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("pole of the integrand on the contour near {0}")]
    PoleOnContour(Complex64),

    #[error("quadrature tolerance not met (estimated error {:.3e})", .0.error_estimate)]
    ToleranceNotMet(QuadratureResult),

    #[error("pole at {0} lies in X")]
    PoleInX(Complex64),

    #[error("no admissible disc found within the first {0} enumeration indices")]
    SearchExhausted(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("format: {0}")]
    Format(String),
}

impl From<serde_json::Error> for CheeseError {
    fn from(e: serde_json::Error) -> Self {
        CheeseError::Format(e.to_string())
    }
}
