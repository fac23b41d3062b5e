use rayon::prelude::*;
use std::f64::consts::PI;

use super::config::{BuildParams, CheeseConfig, Deletion, IndexEntry, Ledger, Provenance};
use super::unit::{transplant, UnitCheese};
use crate::error::{CheeseError, Result};
use crate::geometry::{
    dist_to_square_boundary, enumerate_admissible_discs, CornerSet, Disc, DiscClass, RationalDisc, Square,
};

/// `ε_l = 2^{-l-2}·C0·factor`, half the strict upper bound, where `factor`
/// is `dist(D_l, ∂Q)²`, `dist(D_l, K)²` or `1` for interior, edge and
/// corner discs.
pub fn epsilon_for_index(l: usize, class: DiscClass, c0: f64, d_l: &Disc) -> Result<f64> {
    if l == 0 {
        return Err(CheeseError::Precondition("enumeration indices start at 1".into()));
    }
    let factor = match class {
        DiscClass::Interior => dist_to_square_boundary(d_l, &Square::UNIT).powi(2),
        DiscClass::Edge => CornerSet::disc_distance(d_l).powi(2),
        DiscClass::Corner => 1.0,
    };
    if !(factor > 0.0) {
        return Err(CheeseError::Degenerate(format!("{d_l:?} has zero reference distance")));
    }
    Ok(libm::ldexp(c0 * factor, -(l as i32) - 2))
}

/// Bound on `Σ radius / dist(·, ∂Q)²` for image discs inside `D` whose
/// cross budget `Σ radius / s_1²` is at most `cross`.
///
/// Every such disc has `s_1 < r`, so its radius is below `r²·radius/s_1²`.
/// For interior `D` the boundary distance is at least `dist(D, ∂Q)`; on an
/// edge it is at least `min(s_1, dist(D, K))`; at a corner at least `s_1`.
pub fn boundary_from_cross(class: DiscClass, d: &Disc, cross: f64) -> f64 {
    let r2 = d.radius * d.radius;
    match class {
        DiscClass::Interior => r2 * cross / dist_to_square_boundary(d, &Square::UNIT).powi(2),
        DiscClass::Edge => cross * (1.0 + r2 / CornerSet::disc_distance(d).powi(2)),
        DiscClass::Corner => cross,
    }
}

struct IndexBuild {
    entry: IndexEntry,
    retained: Vec<(Disc, u64)>,
}

fn build_index(
    l: usize,
    exact: RationalDisc,
    class: DiscClass,
    c0: f64,
    n_cap: u64,
    disc_cap: usize,
) -> Result<IndexBuild> {
    let d_l = exact.to_disc();
    let epsilon = epsilon_for_index(l, class, c0, &d_l)?;
    // the transplant divides cross budgets by r, so the unit cheese gets r·ε_l
    let unit_epsilon = epsilon * d_l.radius;
    let unit = UnitCheese::truncated(unit_epsilon, n_cap, disc_cap)?;
    let image = transplant(&unit, &d_l);
    let sq = Square::UNIT;

    let mut retained = Vec::new();
    let mut discarded = 0usize;
    let mut boundary_realized = 0.0;
    let levels = unit.families.iter().flat_map(|f| std::iter::repeat(f.n()).take(f.len()));
    for (disc, level) in image.discs.iter().zip(levels) {
        let inside = sq.contains_interior(disc.center);
        let s = dist_to_square_boundary(disc, &sq);
        if inside && s > 0.0 {
            boundary_realized += disc.radius / (s * s);
            retained.push((*disc, level));
        } else if !inside && s > 0.0 {
            discarded += 1;
        } else {
            return Err(CheeseError::Budget(format!(
                "image disc {disc:?} of D_{l} meets the boundary of Q"
            )));
        }
    }
    let entry = IndexEntry {
        l,
        exact: [exact.re.to_string(), exact.im.to_string(), exact.radius.to_string()],
        disc: d_l,
        class,
        epsilon,
        unit_epsilon,
        m: unit.m,
        n_max: unit.n_max,
        cross_realized: image.budget,
        cross_tail: image.tail,
        retained: retained.len(),
        discarded,
        boundary_realized,
        boundary_tail: boundary_from_cross(class, &d_l, image.tail),
    };
    Ok(IndexBuild { entry, retained })
}

/// The regular layer: the first `disc_count` admissible discs, each filled
/// with a unit cheese truncated at level `n_cap`.
pub fn build_regular_cheese(c0: f64, disc_count: usize, n_cap: u64, disc_cap: usize) -> Result<CheeseConfig> {
    if !(c0 > 0.0) || !c0.is_finite() {
        return Err(CheeseError::Precondition(format!("C0 must be positive, got {c0}")));
    }
    let enumerated = enumerate_admissible_discs(disc_count);
    let builds: Vec<IndexBuild> = enumerated
        .par_iter()
        .enumerate()
        .map(|(i, &(exact, class))| build_index(i + 1, exact, class, c0, n_cap, disc_cap))
        .collect::<Result<_>>()?;

    let total: usize = builds.iter().map(|b| b.retained.len()).sum();
    if total > disc_cap {
        return Err(CheeseError::Resource(format!("{total} retained discs exceed the cap {disc_cap}")));
    }

    let mut ledger = Ledger::default();
    let mut deletions = Vec::with_capacity(total);
    for b in builds {
        let e = &b.entry;
        ledger.mckissick_retained += e.retained;
        ledger.mckissick_discarded += e.discarded;
        ledger.mckissick_boundary_realized += e.boundary_realized;
        ledger.mckissick_boundary_certified += e.boundary_realized + e.boundary_tail;
        ledger.mckissick_cross_charged += e.cross_realized + e.cross_tail;
        deletions.extend(b.retained.into_iter().map(|(disc, level)| Deletion {
            disc,
            provenance: Provenance::McKissick { l: e.l, level },
        }));
        ledger.entries.push(b.entry);
    }
    ledger.combined_boundary_sum = 2.0 * PI * ledger.mckissick_boundary_certified;
    ledger.integral_bound = 2.0 * ledger.combined_boundary_sum;

    let cfg = CheeseConfig {
        square: Square::UNIT,
        deletions,
        budget_c: 4.0 * PI * c0,
        budget_c0: c0,
        params: BuildParams {
            c: 4.0 * PI * c0,
            c0,
            disc_count,
            n_cap,
            n_levels: 0,
            wermer_per_level: 0,
            seed: 0,
            disc_cap,
        },
        ledger,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Entry for index `l` computed without materializing any disc, used for
/// indices past those a configuration was built with.
pub fn index_entry(l: usize, c0: f64) -> Result<IndexEntry> {
    let (exact, class) = *enumerate_admissible_discs(l)
        .last()
        .ok_or_else(|| CheeseError::Precondition("enumeration indices start at 1".into()))?;
    Ok(build_index(l, exact, class, c0, 0, 0)?.entry)
}
