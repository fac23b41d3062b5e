use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::Mul;

use super::wrap_phase;

/// A complex number stored as `(ln|z|, arg z)`. `log_magnitude = -inf`
/// encodes zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_magnitude: f64,
    /// Radians in `(-π, π]`.
    pub phase: f64,
}

impl LogComplex {
    pub const ONE: LogComplex = LogComplex {
        log_magnitude: 0.0,
        phase: 0.0,
    };

    pub fn new(log_magnitude: f64, phase: f64) -> Self {
        LogComplex {
            log_magnitude,
            phase: if phase.is_finite() { wrap_phase(phase) } else { 0.0 },
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        LogComplex::new(z.norm().ln(), z.arg())
    }

    pub fn is_zero(&self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }

    pub fn abs(&self) -> f64 {
        self.log_magnitude.exp()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.abs(), self.phase)
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;

    fn mul(self, rhs: LogComplex) -> LogComplex {
        LogComplex::new(self.log_magnitude + rhs.log_magnitude, self.phase + rhs.phase)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn multiplication_adds_logs_and_wraps_phase() {
        let a = LogComplex::new(1.0, 3.0);
        let b = LogComplex::new(-0.5, 1.0);
        let p = a * b;
        assert_eq!(p.log_magnitude, 0.5);
        assert!((p.phase - (4.0 - 2.0 * PI)).abs() < 1e-15);
        assert!(p.phase > -PI && p.phase <= PI);
    }

    #[test]
    fn phase_range_is_half_open() {
        assert_eq!(LogComplex::new(0.0, -PI).phase, PI);
        assert_eq!(LogComplex::new(0.0, PI).phase, PI);
    }

    #[test]
    fn round_trip_complex() {
        let z = Complex64::new(-3.0, 4.0);
        let back = LogComplex::from_complex(z).to_complex();
        assert!((back - z).norm() < 1e-14);
        assert!(LogComplex::from_complex(Complex64::new(0.0, 0.0)).is_zero());
    }
}
