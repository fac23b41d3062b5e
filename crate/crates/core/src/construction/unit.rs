use num_complex::Complex64;

use super::family::{build_level_family_capped, LevelFamily};
use crate::error::{CheeseError, Result};
use crate::geometry::{budget_sum, Disc, Reference};
use crate::ratfunc::ln_factorial;

/// Smallest `m >= 2` with `m > 2/ε + 1` and
/// `(m+1)!^4 > 2(m+1)^6·2^{2(m+1)} + 2(m+1)^2`, the latter tested in logs.
pub fn select_start_index(epsilon: f64) -> Result<u64> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(CheeseError::Precondition(format!("epsilon must be positive, got {epsilon}")));
    }
    let bound = 2.0 / epsilon + 1.0;
    if bound >= 2f64.powi(62) {
        return Err(CheeseError::Resource(format!("epsilon {epsilon} needs a start index beyond 2^62")));
    }
    let mut m = (bound.floor() as u64 + 1).max(2);
    while !factorial_condition(m) {
        m += 1;
    }
    Ok(m)
}

fn factorial_condition(m: u64) -> bool {
    let k = (m + 1) as f64;
    let lhs = 4.0 * ln_factorial(m + 1);
    // ln(2k^6·4^k + 2k^2), written as ln(2k^6·4^k) + ln(1 + k^{-4}·4^{-k})
    let rhs = 2f64.ln() + 6.0 * k.ln() + k * 4f64.ln() + libm::log1p(k.powi(-4) * 4f64.powf(-k));
    lhs > rhs
}

/// `Σ_{r > n} r^{-2}`, rounded up.
pub fn inverse_square_tail(n: u64) -> f64 {
    let explicit = 1000u64;
    let sum: f64 = (n + 1..=n + explicit).map(|r| (r as f64).powi(-2)).sum();
    // Σ_{r > K} r^{-2} <= 1/K
    (sum + 1.0 / (n + explicit) as f64) * (1.0 + 1e-12)
}

/// Discs of the levels `m..=n_max` around the unit circle, with the budget
/// of the omitted levels charged as `Σ_{r > n_max} r^{-2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitCheese {
    pub epsilon: f64,
    pub m: u64,
    /// Last materialized level; `m - 1` when none is.
    pub n_max: u64,
    pub families: Vec<LevelFamily>,
    pub truncation_tail: f64,
}

impl UnitCheese {
    pub fn discs(&self) -> impl Iterator<Item = &Disc> {
        self.families.iter().flat_map(|f| f.discs.iter())
    }

    pub fn disc_count(&self) -> usize {
        self.families.iter().map(|f| f.len()).sum()
    }

    /// `Σ radius / s_0²` over the materialized discs.
    pub fn realized_budget(&self) -> f64 {
        budget_sum(self.discs(), Reference::Cross(Complex64::new(0.0, 0.0)))
    }

    /// Checks `realized + tail < epsilon`.
    pub fn check_budget(&self) -> Result<()> {
        let total = self.realized_budget() + self.truncation_tail;
        if total < self.epsilon {
            Ok(())
        } else {
            Err(CheeseError::Budget(format!(
                "unit cheese budget {total} is not below epsilon {}",
                self.epsilon
            )))
        }
    }

    /// Levels `m..=min(n_cap, ...)`; when `n_cap < m` nothing is
    /// materialized and the whole budget is the tail `Σ_{r >= m} r^{-2}`.
    pub fn truncated(epsilon: f64, n_cap: u64, disc_cap: usize) -> Result<Self> {
        let m = select_start_index(epsilon)?;
        let n_max = n_cap.max(m - 1);
        Self::with_levels(epsilon, m, n_max, disc_cap)
    }

    fn with_levels(epsilon: f64, m: u64, n_max: u64, disc_cap: usize) -> Result<Self> {
        let mut families = Vec::new();
        let mut used = 0usize;
        for r in m..=n_max {
            let fam = build_level_family_capped(r, disc_cap - used)?;
            used += fam.len();
            families.push(fam);
        }
        let cheese = UnitCheese {
            epsilon,
            m,
            n_max,
            families,
            truncation_tail: inverse_square_tail(n_max),
        };
        cheese.check_budget()?;
        Ok(cheese)
    }
}

pub fn build_unit_cheese(epsilon: f64, n_max: u64) -> Result<UnitCheese> {
    build_unit_cheese_capped(epsilon, n_max, super::family::DEFAULT_DISC_CAP)
}

pub fn build_unit_cheese_capped(epsilon: f64, n_max: u64, disc_cap: usize) -> Result<UnitCheese> {
    let m = select_start_index(epsilon)?;
    if n_max < m {
        return Err(CheeseError::Budget(format!(
            "truncation level {n_max} is below the start index {m} required by epsilon {epsilon}"
        )));
    }
    UnitCheese::with_levels(epsilon, m, n_max, disc_cap)
}

/// Image of a unit cheese in `target`, with `Σ radius / s_1²` against the
/// cross through the target center.
#[derive(Debug, Clone, PartialEq)]
pub struct Transplant {
    pub discs: Vec<Disc>,
    pub budget: f64,
    /// Omitted-level budget after scaling, `tail / r`.
    pub tail: f64,
}

pub fn transplant(u: &UnitCheese, target: &Disc) -> Transplant {
    let discs: Vec<Disc> = u.discs().map(|d| d.affine(target.center, target.radius)).collect();
    let budget = budget_sum(&discs, Reference::Cross(target.center));
    Transplant {
        discs,
        budget,
        tail: u.truncation_tail / target.radius,
    }
}
