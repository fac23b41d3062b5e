use num_complex::Complex64;

use crate::error::{CheeseError, Result};
use crate::geometry::Disc;
use crate::ratfunc::LevelParams;

/// Default cap on the number of discs materialized by one call.
pub const DEFAULT_DISC_CAP: usize = 1 << 24;

/// The ring of `N` discs of one level, radius `n^{-5}·2^{-4n}`, centered at
/// the poles `shrink·ω^{k + 1/2}` of `g_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelFamily {
    pub params: LevelParams,
    pub discs: Vec<Disc>,
}

impl LevelFamily {
    pub fn n(&self) -> u64 {
        self.params.n()
    }

    pub fn len(&self) -> usize {
        self.discs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }
}

pub fn build_level_family(n: u64) -> Result<LevelFamily> {
    build_level_family_capped(n, DEFAULT_DISC_CAP)
}

pub fn build_level_family_capped(n: u64, cap: usize) -> Result<LevelFamily> {
    let params = LevelParams::new(n)?;
    let count = params
        .roots()
        .filter(|&c| c <= cap as u64)
        .ok_or_else(|| CheeseError::Resource(format!("level {n} has more than {cap} discs")))?;
    let radius = params.disc_radius();
    let discs = (0..count)
        .map(|k| Disc {
            center: params.center(k),
            radius,
        })
        .collect();
    Ok(LevelFamily { params, discs })
}

/// Discs of a family that intersect pairwise, found by comparing angular
/// neighbors after sorting by argument. Empty for every valid family.
pub fn overlapping_pairs(discs: &[Disc]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..discs.len()).collect();
    order.sort_by(|&a, &b| discs[a].center.arg().total_cmp(&discs[b].center.arg()));
    let mut out = Vec::new();
    if discs.len() < 2 {
        return out;
    }
    for w in 0..order.len() {
        let (i, j) = (order[w], order[(w + 1) % order.len()]);
        if i == j {
            continue;
        }
        let gap: Complex64 = discs[i].center - discs[j].center;
        if gap.norm() <= discs[i].radius + discs[j].radius {
            out.push((i.min(j), i.max(j)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{budget_sum, Reference};

    #[test]
    fn level_three_family() {
        let fam = build_level_family(3).unwrap();
        assert_eq!(fam.len(), 192);
        let p = fam.params;
        let gap = 2.0 * p.shrink() * (std::f64::consts::PI / 192.0).sin();
        assert!((gap - 0.03221).abs() < 1e-5);
        let two_r = 2.0 * 3f64.powi(-5) * 2f64.powi(-12);
        assert!((two_r - 2.009e-6).abs() < 1e-9);
        assert!(gap > two_r);
        assert!(overlapping_pairs(&fam.discs).is_empty());
        let b = budget_sum(&fam.discs, Reference::Cross(Complex64::new(0.0, 0.0)));
        assert!(b < 1.0 / 9.0);
    }

    #[test]
    fn centers_lie_on_the_shrunk_circle() {
        let fam = build_level_family(5).unwrap();
        let s = fam.params.shrink();
        for d in &fam.discs {
            assert!((d.center.norm() - s).abs() <= 1e-15 * s);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(build_level_family_capped(4, 1000), Err(CheeseError::Resource(_))));
        assert!(build_level_family_capped(4, 1024).is_ok());
        assert!(matches!(build_level_family(40), Err(CheeseError::Resource(_))));
    }

    #[test]
    fn overlap_detection_sees_collisions() {
        let discs = vec![
            Disc { center: Complex64::new(1.0, 0.0), radius: 0.1 },
            Disc { center: Complex64::new(0.0, 1.0), radius: 0.1 },
            Disc { center: Complex64::new(1.0, 0.15), radius: 0.1 },
        ];
        assert_eq!(overlapping_pairs(&discs), vec![(0, 2)]);
    }
}
