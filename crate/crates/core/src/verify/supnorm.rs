use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::quadrature::{contour_integral_boundary, QuadratureResult};
use super::report::CertReport;
use super::sampling::Kronecker;
use crate::construction::CheeseConfig;
use crate::error::{CheeseError, Result};
use crate::geometry::{Disc, Square};
use crate::ratfunc::RationalExpr;

/// Uniform bucket grid over a square for point-in-disc queries.
pub struct DiscIndex<'a> {
    discs: Vec<&'a Disc>,
    square: Square,
    cells: usize,
    buckets: Vec<Vec<u32>>,
}

impl<'a> DiscIndex<'a> {
    pub fn new<I: IntoIterator<Item = &'a Disc>>(discs: I, square: Square) -> Self {
        let discs: Vec<&Disc> = discs.into_iter().collect();
        let cells = ((discs.len() as f64).sqrt().ceil() as usize).clamp(1, 512);
        let mut buckets = vec![Vec::new(); cells * cells];
        let mut idx = DiscIndex { discs: Vec::new(), square, cells, buckets: Vec::new() };
        for (i, d) in discs.iter().enumerate() {
            let (x0, y0) = idx.cell_of(d.center - Complex64::new(d.radius, d.radius));
            let (x1, y1) = idx.cell_of(d.center + Complex64::new(d.radius, d.radius));
            for x in x0..=x1 {
                for y in y0..=y1 {
                    buckets[y * cells + x].push(i as u32);
                }
            }
        }
        idx.discs = discs;
        idx.buckets = buckets;
        idx
    }

    fn cell_of(&self, z: Complex64) -> (usize, usize) {
        let w = 2.0 * self.square.half_width;
        let lo = self.square.center - Complex64::new(self.square.half_width, self.square.half_width);
        let f = |t: f64| ((t / w * self.cells as f64).floor().max(0.0) as usize).min(self.cells - 1);
        (f(z.re - lo.re), f(z.im - lo.im))
    }

    /// True when `z` lies in one of the open discs.
    pub fn contains(&self, z: Complex64) -> bool {
        let (x, y) = self.cell_of(z);
        self.buckets[y * self.cells + x]
            .iter()
            .any(|&i| self.discs[i as usize].contains_open(z))
    }
}

/// Lower estimate of `|e|_X`, with where it was attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    pub value: f64,
    pub argmax: Complex64,
    pub samples: usize,
}

/// Samples of `X` at a density: `density` points on `∂Q`, on each deleted
/// circle, and in the interior. Larger densities extend smaller ones.
pub fn x_samples(cfg: &CheeseConfig, density: usize, seed: u64) -> Vec<Complex64> {
    let sq = cfg.square;
    let index = DiscIndex::new(cfg.discs(), sq);
    let seq = Kronecker::new(seed);
    let mut out: Vec<Complex64> = (0..density).map(|k| sq.perimeter_point(seq.one(k))).collect();
    out.extend(sq.corners());
    for d in cfg.discs() {
        out.extend(
            (0..density)
                .map(|k| d.center + Complex64::from_polar(d.radius, TAU * seq.one(k)))
                .filter(|&z| sq.contains(z) && !index.contains(z)),
        );
    }
    out.extend(
        (0..density)
            .map(|k| {
                let (u, v) = seq.two(k);
                sq.center + sq.half_width * Complex64::new(2.0 * u - 1.0, 2.0 * v - 1.0)
            })
            .filter(|&z| !index.contains(z)),
    );
    out
}

/// Fails with `PoleInX` when a pole of `e` lies in `Q` but in no deleted disc.
pub fn check_poles_off_x(e: &RationalExpr, cfg: &CheeseConfig) -> Result<()> {
    let index = DiscIndex::new(cfg.discs(), cfg.square);
    for p in e.poles() {
        if cfg.square.contains(p) && !index.contains(p) {
            return Err(CheeseError::PoleInX(p));
        }
    }
    Ok(())
}

/// Lower estimate of the uniform norm of `e` on `X`. Every sample is a
/// point of `X`, so the estimate never exceeds the true norm, and since the
/// maximum is attained on the boundary of `X` it approaches the norm as the
/// density grows.
pub fn sup_norm_estimate(e: &RationalExpr, cfg: &CheeseConfig, density: usize) -> Result<SupEstimate> {
    check_poles_off_x(e, cfg)?;
    let pts = x_samples(cfg, density.max(1), 0);
    let vals = pts
        .par_iter()
        .map(|&z| e.eval(z).map(|v| v.norm()))
        .collect::<Result<Vec<f64>>>()?;
    let (i, value) = vals
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
    Ok(SupEstimate { value, argmax: pts[i], samples: pts.len() })
}

/// `|∮ f'g|` against `2|f|_X|g|_X·Σ c/s²` and against `C|f|_X|g|_X`. The
/// norms are under-estimates, so a failed comparison is inconclusive.
pub fn check_derivation_bound(
    f: &RationalExpr,
    g: &RationalExpr,
    cfg: &CheeseConfig,
    density: usize,
    tol: f64,
) -> Result<(QuadratureResult, [CertReport; 2])> {
    let nf = sup_norm_estimate(f, cfg, density)?;
    let ng = sup_norm_estimate(g, cfg, density)?;
    let quad = contour_integral_boundary(f, g, tol)?;
    let value = quad.value.norm();
    let why = "norms are sampled under-estimates; raise the density";
    let prod = nf.value * ng.value;
    let sum = CertReport::at_most("derivation.sum", value, cfg.ledger.integral_bound * prod)
        .param("norm_f", nf.value)
        .param("norm_g", ng.value)
        .param("boundary_sum", cfg.ledger.combined_boundary_sum)
        .param("density", density as f64)
        .sampled(nf.samples + ng.samples, 0)
        .soften(why);
    let constant = CertReport::at_most("derivation.constant", value, cfg.budget_c * prod)
        .param("norm_f", nf.value)
        .param("norm_g", ng.value)
        .param("C", cfg.budget_c)
        .param("density", density as f64)
        .sampled(nf.samples + ng.samples, 0)
        .soften(why);
    Ok((quad, [sum, constant]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{assemble_cheese, Caps, EmptyWermer, StubWermer};
    use crate::verify::Verdict;
    use std::f64::consts::PI;

    fn empty_cfg() -> CheeseConfig {
        assemble_cheese(4.0 * PI, 1, 0, &EmptyWermer, Caps::default()).unwrap()
    }

    fn stub_cfg() -> CheeseConfig {
        assemble_cheese(4.0 * PI, 4, 4, &StubWermer { per_level: 2, seed: 5 }, Caps::default()).unwrap()
    }

    #[test]
    fn identity_peaks_at_corners() {
        let s = sup_norm_estimate(&RationalExpr::identity(), &empty_cfg(), 64).unwrap();
        assert!((s.value - 2f64.sqrt()).abs() < 1e-15);
        let one = sup_norm_estimate(&RationalExpr::constant(Complex64::new(1.0, 0.0)), &empty_cfg(), 1).unwrap();
        assert_eq!(one.value, 1.0);
    }

    #[test]
    fn pole_in_x_is_rejected() {
        let g = RationalExpr::simple_pole(Complex64::new(0.2, 0.1));
        assert!(matches!(sup_norm_estimate(&g, &empty_cfg(), 16), Err(CheeseError::PoleInX(_))));
    }

    #[test]
    fn deleted_pole_norm_tends_to_inverse_radius() {
        let cfg = stub_cfg();
        let d = cfg.wermer().next().unwrap().disc;
        let g = RationalExpr::simple_pole(d.center);
        let mut last = 0.0;
        for density in [16, 64, 256, 1024] {
            let s = sup_norm_estimate(&g, &cfg, density).unwrap();
            assert!(s.value >= last);
            assert!(s.value <= 1.0 / d.radius * (1.0 + 1e-12));
            last = s.value;
        }
        assert!(last > 0.999 / d.radius);
    }

    #[test]
    fn derivation_of_cauchy_kernel() {
        let cfg = stub_cfg();
        let p = cfg.wermer().next().unwrap().disc.center;
        let (quad, [a, b]) =
            check_derivation_bound(&RationalExpr::identity(), &RationalExpr::simple_pole(p), &cfg, 256, 1e-10).unwrap();
        assert!((quad.value.norm() - 2.0 * PI).abs() < 1e-9);
        assert!(a.passed(), "{a:?}");
        assert!(b.passed(), "{b:?}");
        let one = RationalExpr::constant(Complex64::new(1.0, 0.0));
        let (q, [a, _]) = check_derivation_bound(&one, &one, &cfg, 16, 1e-10).unwrap();
        assert_eq!(q.value.norm(), 0.0);
        assert_eq!(a.verdict, Verdict::Pass);
    }

    #[test]
    fn index_agrees_with_linear_scan() {
        let cfg = stub_cfg();
        let index = DiscIndex::new(cfg.discs(), cfg.square);
        let seq = Kronecker::new(9);
        for k in 0..5000 {
            let (u, v) = seq.two(k);
            let z = Complex64::new(2.0 * u - 1.0, 2.0 * v - 1.0);
            assert_eq!(index.contains(z), cfg.is_deleted(z));
        }
    }
}
