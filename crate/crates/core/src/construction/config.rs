use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{CheeseError, Result};
use crate::geometry::{dist_to_square_boundary, Disc, DiscClass, Square};

/// Where a deleted disc came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Level `level` of the unit cheese transplanted into the `l`-th
    /// enumerated disc.
    McKissick { l: usize, level: u64 },
    /// The `k`-th domain placed inside `L_n·Q`.
    Wermer { n: u32, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deletion {
    pub disc: Disc,
    pub provenance: Provenance,
}

/// Parameters a configuration was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildParams {
    pub c: f64,
    pub c0: f64,
    pub disc_count: usize,
    pub n_cap: u64,
    pub n_levels: u32,
    pub wermer_per_level: usize,
    pub seed: u64,
    pub disc_cap: usize,
}

/// Bookkeeping for one enumerated disc `D_l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub l: usize,
    /// Exact center and radius as `"p/q"` strings.
    pub exact: [String; 3],
    pub disc: Disc,
    pub class: DiscClass,
    pub epsilon: f64,
    pub unit_epsilon: f64,
    pub m: u64,
    /// Last materialized level (`m - 1` when none).
    pub n_max: u64,
    /// `Σ radius / s_1²` over all materialized image discs.
    pub cross_realized: f64,
    /// Charged cross budget of the omitted levels.
    pub cross_tail: f64,
    pub retained: usize,
    pub discarded: usize,
    /// `Σ radius / dist(·, ∂Q)²` over retained image discs.
    pub boundary_realized: f64,
    /// Bound on the same quantity for the omitted levels.
    pub boundary_tail: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WermerLevel {
    pub n: u32,
    pub scale: f64,
    pub count: usize,
    pub length: f64,
    pub length_budget: f64,
    /// `Σ c / s²` with `c = 2πρ`, `s = dist(·, ∂Q)`.
    pub boundary_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Ledger {
    pub entries: Vec<IndexEntry>,
    pub mckissick_retained: usize,
    pub mckissick_discarded: usize,
    pub mckissick_boundary_realized: f64,
    /// Realized plus charged tails: a bound for the full infinite layer.
    pub mckissick_boundary_certified: f64,
    pub mckissick_cross_charged: f64,
    pub wermer_levels: Vec<WermerLevel>,
    pub wermer_boundary_sum: f64,
    /// `Σ c_n / s_n²` over both layers, McKissick discs counted with `2πr`.
    pub combined_boundary_sum: f64,
    /// `2 Σ c_n / s_n²`, the constant in front of `|f|_X |g|_X`.
    pub integral_bound: f64,
}

/// `Q` minus the listed open discs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheeseConfig {
    pub square: Square,
    pub deletions: Vec<Deletion>,
    pub budget_c: f64,
    pub budget_c0: f64,
    pub params: BuildParams,
    pub ledger: Ledger,
}

impl CheeseConfig {
    pub fn discs(&self) -> impl Iterator<Item = &Disc> {
        self.deletions.iter().map(|d| &d.disc)
    }

    pub fn mckissick(&self) -> impl Iterator<Item = &Deletion> {
        self.deletions
            .iter()
            .filter(|d| matches!(d.provenance, Provenance::McKissick { .. }))
    }

    pub fn wermer(&self) -> impl Iterator<Item = &Deletion> {
        self.deletions
            .iter()
            .filter(|d| matches!(d.provenance, Provenance::Wermer { .. }))
    }

    /// Ledger sums recomputed from the deletion list alone.
    pub fn recompute(&self) -> Recomputed {
        let sq = &self.square;
        let mut r = Recomputed::default();
        for d in &self.deletions {
            let s = dist_to_square_boundary(&d.disc, sq);
            match d.provenance {
                Provenance::McKissick { .. } => r.mckissick_boundary += d.disc.radius / (s * s),
                Provenance::Wermer { .. } => r.wermer_boundary += 2.0 * PI * d.disc.radius / (s * s),
            }
        }
        r
    }

    /// Checks the structural and budget invariants.
    pub fn validate(&self) -> Result<()> {
        for d in &self.deletions {
            let s = dist_to_square_boundary(&d.disc, &self.square);
            if !(s > 0.0) || !self.square.contains_interior(d.disc.center) {
                return Err(CheeseError::Budget(format!(
                    "deletion {:?} does not lie strictly inside the square",
                    d.disc
                )));
            }
        }
        let led = &self.ledger;
        if !(led.mckissick_boundary_certified < self.budget_c0) {
            return Err(CheeseError::Budget(format!(
                "McKissick boundary budget {} is not below C0 = {}",
                led.mckissick_boundary_certified, self.budget_c0
            )));
        }
        let limit = self.budget_c / 2.0 + 2.0 * PI * self.budget_c0;
        if !(led.combined_boundary_sum < limit) {
            return Err(CheeseError::Budget(format!(
                "combined boundary sum {} is not below C/2 + 2πC0 = {limit}",
                led.combined_boundary_sum
            )));
        }
        let r = self.recompute();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        if !close(r.mckissick_boundary, led.mckissick_boundary_realized)
            || !close(r.wermer_boundary, led.wermer_boundary_sum)
        {
            return Err(CheeseError::Budget(format!(
                "ledger disagrees with the deletion list: {r:?}"
            )));
        }
        Ok(())
    }

    /// True when `z` lies in one of the open deleted discs.
    pub fn is_deleted(&self, z: Complex64) -> bool {
        self.deletions.iter().any(|d| d.disc.contains_open(z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Recomputed {
    pub mckissick_boundary: f64,
    pub wermer_boundary: f64,
}
