use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{log_gn, LevelParams, LogComplex};
use crate::error::{CheeseError, Result};

/// `ln(k!)` through the log-gamma function.
pub fn ln_factorial(k: u64) -> f64 {
    libm::lgamma(k as f64 + 1.0)
}

/// `f_n = (m!)^{-4} · g_m · g_{m+1} ⋯ g_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductFunction {
    m: u64,
    levels: Vec<LevelParams>,
    log_prefactor: f64,
}

impl ProductFunction {
    /// Levels `m..=n_max`; `n_max = m - 1` gives the bare prefactor.
    pub fn new(m: u64, n_max: u64) -> Result<Self> {
        if m < 2 {
            return Err(CheeseError::Precondition(format!("start index must be at least 2, got {m}")));
        }
        if n_max + 1 < m {
            return Err(CheeseError::Precondition(format!(
                "truncation level {n_max} is below start index {m} - 1"
            )));
        }
        let levels = (m..=n_max).map(LevelParams::new).collect::<Result<Vec<_>>>()?;
        Ok(ProductFunction {
            m,
            levels,
            log_prefactor: -4.0 * ln_factorial(m),
        })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Last included level, `m - 1` when no level is included.
    pub fn n_max(&self) -> u64 {
        self.m + self.levels.len() as u64 - 1
    }

    pub fn levels(&self) -> &[LevelParams] {
        &self.levels
    }

    pub fn log_prefactor(&self) -> f64 {
        self.log_prefactor
    }

    /// The same product with one more level.
    pub fn extended(&self) -> Result<Self> {
        ProductFunction::new(self.m, self.n_max() + 1)
    }
}

/// Log-domain value of the product at `z`.
pub fn eval_product(f: &ProductFunction, z: Complex64) -> Result<LogComplex> {
    let mut acc = LogComplex::new(f.log_prefactor, 0.0);
    for p in &f.levels {
        acc = acc * log_gn(p, z)?;
    }
    Ok(acc)
}

/// Value of the limit function `f = lim f_n` at a point, bracketed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FLimit {
    /// `f_{n_max}(z)`.
    pub partial: LogComplex,
    /// `ln` of the lower and upper ends of the certified tail factor
    /// bracketing `|∏_{r > n_max} g_r(z)|`.
    pub ln_tail_lower: f64,
    pub ln_tail_upper: f64,
    /// `ln ∏_{r > n_max} (1 ∓ (r+1)^{-4})`, the generic tail interval.
    pub ln_generic_lower: f64,
    pub ln_generic_upper: f64,
    /// Whether every pointwise tail term was within `(r+1)^{-4}`, i.e.
    /// whether the generic interval is itself certified at this point.
    pub generic_valid: bool,
}

impl FLimit {
    pub fn ln_lower(&self) -> f64 {
        self.partial.log_magnitude + self.ln_tail_lower
    }

    pub fn ln_upper(&self) -> f64 {
        self.partial.log_magnitude + self.ln_tail_upper
    }
}

// relative slack absorbing floating-point error in the bracket ends
const SLACK: f64 = 1e-9;

/// Largest modulus at which the tail estimate past level `n` applies.
pub fn tail_region_radius(n: u64) -> f64 {
    1.0 - libm::ldexp(1.0, -((2 * (n + 1) - 1).min(4096) as i32))
}

/// Evaluate `f_{n_max}` and bracket the infinite tail `∏_{r > n_max} g_r`.
///
/// Each tail factor satisfies `|1 - g_r(z)| <= q_r / (1 - q_r)` where
/// `q_r = |ω^{-1/2} z / shrink_r|^{N_r} < 1` on the tail region, and these
/// terms are summed until they underflow.
pub fn eval_f_limit(f: &ProductFunction, z: Complex64) -> Result<FLimit> {
    let n_max = f.n_max();
    let region = tail_region_radius(n_max);
    if !(z.norm() <= region) {
        return Err(CheeseError::Domain(format!(
            "|z| = {} outside the tail region |z| <= {region}",
            z.norm()
        )));
    }
    if let Some(p) = f.levels.iter().find(|p| p.in_some_disc(z)) {
        return Err(CheeseError::Domain(format!("{z} lies in a deleted disc of level {}", p.n())));
    }
    let partial = eval_product(f, z)?;

    let mut ln_lower = 0.0;
    let mut ln_upper = 0.0;
    let mut generic_valid = true;
    let mut r = n_max + 1;
    loop {
        let ln_q = LevelParams::new(r)?.scaled_power(z).ln_abs;
        debug_assert!(ln_q < 0.0);
        let q = ln_q.exp();
        let term = (q / (1.0 - q)) * (1.0 + SLACK);
        if term > (r as f64 + 1.0).powi(-4) {
            generic_valid = false;
        }
        if term >= 1.0 {
            return Err(CheeseError::Domain(format!("tail term at level {r} is not below one")));
        }
        ln_lower += libm::log1p(-term);
        ln_upper += libm::log1p(term);
        // once ln q_r < -745 the remaining terms shrink at least
        // geometrically and are below the smallest positive double
        if ln_q < -745.0 || r > n_max + 4096 {
            ln_lower += libm::log1p(-2.0 * f64::MIN_POSITIVE);
            ln_upper += libm::log1p(2.0 * f64::MIN_POSITIVE);
            break;
        }
        r += 1;
    }
    let (g_lo, g_hi) = generic_tail(n_max);
    Ok(FLimit {
        partial,
        ln_tail_lower: ln_lower - SLACK,
        ln_tail_upper: ln_upper + SLACK,
        ln_generic_lower: g_lo,
        ln_generic_upper: g_hi,
        generic_valid,
    })
}

/// `(ln ∏_{r>n} (1 - (r+1)^{-4}), ln ∏_{r>n} (1 + (r+1)^{-4}))`, with the
/// remainder past the explicit terms bounded by an integral.
pub fn generic_tail(n: u64) -> (f64, f64) {
    let explicit = 20_000u64;
    let mut lo = 0.0;
    let mut hi = 0.0;
    for r in n + 1..=n + explicit {
        let t = (r as f64 + 1.0).powi(-4);
        lo += libm::log1p(-t);
        hi += libm::log1p(t);
    }
    // Σ_{k > K} k^{-4} <= ∫_K^∞ x^{-4} dx with K = n + explicit + 1
    let rest = (3.0 * ((n + explicit + 1) as f64).powi(3)).recip();
    (lo - 2.0 * rest, hi + rest)
}
