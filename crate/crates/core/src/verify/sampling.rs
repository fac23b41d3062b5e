use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{CheeseError, Result};
use crate::geometry::Square;

// 1/φ and the R2 constants 1/g, 1/g² for the plastic number g
const GOLDEN: f64 = 0.618_033_988_749_894_9;
const PLASTIC_1: f64 = 0.754_877_666_246_692_8;
const PLASTIC_2: f64 = 0.569_840_290_998_053_3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Circle { center: Complex64, radius: f64 },
    /// Centered at the origin; `inner = 0` gives a disc.
    Annulus { inner: f64, outer: f64 },
    SquareBoundary { square: Square },
    SquareArea { square: Square },
}

/// Deterministic low-discrepancy points in a region.
///
/// The `k`-th point depends only on `k` and the seed, so a plan with a
/// larger count extends a smaller one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub region: Region,
    pub count: usize,
    pub seed: u64,
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// Kronecker sequences `frac(x0 + kα)` with seeded offsets.
#[derive(Debug, Clone, Copy)]
pub struct Kronecker {
    offset: [f64; 2],
}

impl Kronecker {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Kronecker {
            offset: [rng.random::<f64>(), rng.random::<f64>()],
        }
    }

    pub fn one(&self, k: usize) -> f64 {
        frac(self.offset[0] + k as f64 * GOLDEN)
    }

    pub fn two(&self, k: usize) -> (f64, f64) {
        (
            frac(self.offset[0] + k as f64 * PLASTIC_1),
            frac(self.offset[1] + k as f64 * PLASTIC_2),
        )
    }
}

impl SamplePlan {
    pub fn new(region: Region, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(CheeseError::Precondition("sample count must be at least 1".into()));
        }
        match region {
            Region::Circle { radius, .. } if !(radius >= 0.0) => {
                return Err(CheeseError::Precondition(format!("bad circle radius {radius}")))
            }
            Region::Annulus { inner, outer } if !(inner >= 0.0 && outer >= inner) => {
                return Err(CheeseError::Precondition(format!("bad annulus [{inner}, {outer}]")))
            }
            _ => {}
        }
        Ok(SamplePlan { region, count, seed })
    }

    pub fn point(&self, seq: &Kronecker, k: usize) -> Complex64 {
        match self.region {
            Region::Circle { center, radius } => center + Complex64::from_polar(radius, TAU * seq.one(k)),
            Region::Annulus { inner, outer } => {
                let (u, v) = seq.two(k);
                let r = (inner * inner + (outer * outer - inner * inner) * u).sqrt();
                Complex64::from_polar(r, TAU * v)
            }
            Region::SquareBoundary { square } => square.perimeter_point(seq.one(k)),
            Region::SquareArea { square } => {
                let (u, v) = seq.two(k);
                square.center + square.half_width * Complex64::new(2.0 * u - 1.0, 2.0 * v - 1.0)
            }
        }
    }

    pub fn points(&self) -> Vec<Complex64> {
        let seq = Kronecker::new(self.seed);
        (0..self.count).map(|k| self.point(&seq, k)).collect()
    }

    /// The first `count` points satisfying `keep`, scanning at most
    /// `64·count` candidates.
    pub fn points_where<F: Fn(Complex64) -> bool>(&self, keep: F) -> Vec<Complex64> {
        let seq = Kronecker::new(self.seed);
        (0..self.count.saturating_mul(64))
            .map(|k| self.point(&seq, k))
            .filter(|&z| keep(z))
            .take(self.count)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plans_are_deterministic_and_nested() {
        let a = SamplePlan::new(Region::Annulus { inner: 0.5, outer: 1.0 }, 100, 7).unwrap();
        let b = SamplePlan { count: 300, ..a };
        assert_eq!(a.points(), a.points());
        assert_eq!(a.points()[..], b.points()[..100]);
        let other = SamplePlan { seed: 8, ..a };
        assert_ne!(a.points(), other.points());
    }

    #[test]
    fn points_stay_in_region() {
        let ring = SamplePlan::new(Region::Annulus { inner: 0.5, outer: 1.0 }, 2000, 1).unwrap();
        assert!(ring.points().iter().all(|z| z.norm() >= 0.5 - 1e-15 && z.norm() <= 1.0 + 1e-15));
        let edge = SamplePlan::new(Region::SquareBoundary { square: Square::UNIT }, 500, 1).unwrap();
        for z in edge.points() {
            assert!((Square::UNIT.point_distance_to_boundary(z)).abs() < 1e-15);
        }
        let circ = SamplePlan::new(
            Region::Circle { center: Complex64::new(0.2, 0.0), radius: 0.1 },
            100,
            1,
        )
        .unwrap();
        assert!(circ.points().iter().all(|z| ((z - 0.2).norm() - 0.1).abs() < 1e-15));
    }

    #[test]
    fn annulus_covers_angles_evenly() {
        let plan = SamplePlan::new(Region::Annulus { inner: 0.0, outer: 1.0 }, 4096, 3).unwrap();
        let mut bins = [0usize; 8];
        for z in plan.points() {
            bins[((z.arg() + std::f64::consts::PI) / TAU * 8.0) as usize % 8] += 1;
        }
        assert!(bins.iter().all(|&b| (b as i64 - 512).abs() < 20), "{bins:?}");
    }

    #[test]
    fn invalid_plans_rejected() {
        assert!(SamplePlan::new(Region::Annulus { inner: 1.0, outer: 0.5 }, 10, 0).is_err());
        assert!(SamplePlan::new(Region::SquareArea { square: Square::UNIT }, 0, 0).is_err());
    }

    #[test]
    fn filtered_points() {
        let plan = SamplePlan::new(Region::SquareArea { square: Square::UNIT }, 50, 2).unwrap();
        let pts = plan.points_where(|z| z.re > 0.0);
        assert_eq!(pts.len(), 50);
        assert!(pts.iter().all(|z| z.re > 0.0));
    }
}
