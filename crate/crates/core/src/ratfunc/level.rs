use num_complex::Complex64;
use std::f64::consts::TAU;

use super::{frac_doublings, frac_mul, turns_of, PolarPower};
use crate::error::{CheeseError, Result};

/// Parameters of one level: `N = n·2^{2n}` roots, `shrink = 1 - 2^{-2n}`,
/// `delta = n^{-3}·2^{-2n}`, `omega = exp(2πi/N)`.
///
/// Only `n` is stored. `N` overflows a `u64` past `n = 29` and a double past
/// `n ≈ 507`; everything that depends on it is computed from `n` directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LevelParams {
    n: u64,
}

impl LevelParams {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(CheeseError::Precondition(format!("level index must be at least 2, got {n}")));
        }
        Ok(LevelParams { n })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `N = n·2^{2n}` when it fits in a `u64`.
    pub fn roots(&self) -> Option<u64> {
        if self.n >= 32 {
            return None;
        }
        self.n.checked_mul(1u64 << (2 * self.n))
    }

    pub fn roots_f64(&self) -> f64 {
        libm::ldexp(self.n as f64, (2 * self.n).min(4096) as i32)
    }

    /// `2^{-2n}`.
    fn quarter_power(&self) -> f64 {
        libm::ldexp(1.0, -((2 * self.n).min(4096) as i32))
    }

    pub fn shrink(&self) -> f64 {
        1.0 - self.quarter_power()
    }

    /// `ln(shrink)`, accurate even when `shrink` rounds to one.
    pub fn ln_shrink(&self) -> f64 {
        libm::log1p(-self.quarter_power())
    }

    pub fn delta(&self) -> f64 {
        (self.n as f64).powi(-3) * self.quarter_power()
    }

    /// Radius `n^{-5}·2^{-4n}` of the discs in the level family.
    pub fn disc_radius(&self) -> f64 {
        (self.n as f64).powi(-5) * self.quarter_power() * self.quarter_power()
    }

    pub fn omega(&self) -> Complex64 {
        Complex64::from_polar(1.0, TAU / self.roots_f64())
    }

    /// Center `shrink·ω^{k + 1/2}` of the `k`-th disc, which is also the
    /// `k`-th pole of `g_n`.
    pub fn center(&self, k: u64) -> Complex64 {
        let n_roots = self.roots_f64();
        Complex64::from_polar(self.shrink(), TAU * (k as f64 + 0.5) / n_roots)
    }

    /// Inner and outer radius of the annulus `1 - 2^{-(2n-1)} <= |z| <= 1 - 2^{-(2n+1)}`.
    pub fn annulus(&self) -> (f64, f64) {
        let q = self.quarter_power();
        (1.0 - 2.0 * q, 1.0 - 0.5 * q)
    }

    /// Index of the disc whose center is angularly nearest to `z`.
    pub fn nearest_index(&self, z: Complex64) -> Option<u64> {
        let n_roots = self.roots()?;
        let pos = turns_of(z) * n_roots as f64 - 0.5;
        Some((pos.round().rem_euclid(n_roots as f64) as u64) % n_roots)
    }

    /// True when `z` lies in the open disc of this level nearest to it.
    /// Levels too large to index can only be met by points whose modulus
    /// is within a disc radius of `shrink`.
    pub fn in_some_disc(&self, z: Complex64) -> bool {
        let rho = self.disc_radius();
        let modulus = z.norm();
        if (modulus - self.shrink()).abs() >= rho {
            return false;
        }
        match self.nearest_index(z) {
            Some(k) => (z - self.center(k)).norm() < rho,
            None => true,
        }
    }

    /// `(ω^{-1/2} z / shrink)^N` in polar form.
    pub fn scaled_power(&self, z: Complex64) -> PolarPower {
        let n = self.n;
        let q = self.quarter_power();
        // 2^{2n}·(-ln shrink), which tends to one
        let shrink_term = if q > 0.0 { -libm::log1p(-q) / q } else { 1.0 };
        let ln_z = z.norm().ln();
        let scaled = if ln_z == 0.0 {
            0.0
        } else {
            libm::ldexp(ln_z, (2 * n).min(4096) as i32)
        };
        let ln_abs = n as f64 * (scaled + shrink_term);
        let turns = frac_doublings(frac_mul(n, turns_of(z)), 2 * n);
        PolarPower {
            ln_abs,
            turns: (turns - 0.5).rem_euclid(1.0),
        }
    }
}
