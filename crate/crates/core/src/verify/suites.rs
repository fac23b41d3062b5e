use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

use super::quadrature::{contour_integral_boundary, residue_oracle, DEFAULT_TOLERANCE};
use super::report::CertReport;
use super::supnorm::{check_derivation_bound, sup_norm_estimate};
use crate::construction::{
    boundary_from_cross, epsilon_for_index, inverse_square_tail, select_start_index, CheeseConfig, Provenance,
};
use crate::error::Result;
use crate::geometry::{dist_to_square_boundary, enumerate_admissible_discs, Square};
use crate::ratfunc::RationalExpr;

fn point_in(rng: &mut ChaCha8Rng, half: f64) -> Complex64 {
    Complex64::new(rng.random_range(-half..half), rng.random_range(-half..half))
}

fn point_outside(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = point_in(rng, 3.0);
        if Square::UNIT.point_distance_to_boundary(z) > 0.1 && !Square::UNIT.contains(z) {
            return z;
        }
    }
}

/// A pair `(f, g)` of rational functions with simple poles in `0.85·Q` and
/// outside `1.1·Q`, pairwise at least `0.05` apart.
pub fn random_rational_pair(seed: u64, k: u64) -> (RationalExpr, RationalExpr) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    let one = Complex64::new(1.0, 0.0);
    let mut poles: Vec<Complex64> = Vec::new();
    let mut fresh = |rng: &mut ChaCha8Rng, inside: bool| loop {
        let z = if inside { point_in(rng, 0.85) } else { point_outside(rng) };
        if poles.iter().all(|p| (p - z).norm() > 0.05) {
            poles.push(z);
            return z;
        }
    };
    let nf = rng.random_range(1..=2);
    let f_poles: Vec<Complex64> = (0..nf).map(|i| fresh(&mut rng, i == 0)).collect();
    let ng = rng.random_range(1..=3);
    let g_poles: Vec<Complex64> = (0..ng).map(|i| fresh(&mut rng, i != 2)).collect();
    let f_num: Vec<Complex64> = (0..rng.random_range(1..=nf + 1)).map(|_| point_in(&mut rng, 1.0)).collect();
    let g_num: Vec<Complex64> = (0..rng.random_range(1..=ng)).map(|_| point_in(&mut rng, 1.0)).collect();
    let f = RationalExpr::from_poles(f_num, one, f_poles).expect("nonzero denominator");
    let g = RationalExpr::from_poles(g_num, one, g_poles).expect("nonzero denominator");
    (f, g)
}

/// Quadrature of `∮ f'g` on `∂Q` against the residue sum for `count` random
/// pairs, and `∮ dz/(z - p)` against `2πi`.
pub fn check_residue_oracle(count: usize, seed: u64) -> Result<Vec<CertReport>> {
    let mut worst = 0.0f64;
    let mut worst_abs = 0.0f64;
    let mut panels = 0usize;
    for k in 0..count as u64 {
        let (f, g) = random_rational_pair(seed, k);
        let quad = contour_integral_boundary(&f, &g, 1e-11)?;
        let oracle = residue_oracle(&f, &g);
        let dev = (quad.value - oracle).norm();
        worst = worst.max(dev / 1e-9f64.max(1e-6 * oracle.norm()));
        worst_abs = worst_abs.max(dev);
        panels = panels.max(quad.panels);
    }
    let pairs = CertReport::at_most("residue.pairs", worst, 1.0)
        .param("pairs", count as f64)
        .param("max_abs_deviation", worst_abs)
        .param("max_panels", panels as f64)
        .sampled(count, seed)
        .note("measured is the largest deviation over max(1e-9, 1e-6·|oracle|)");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = point_in(&mut rng, 0.9);
    let quad = contour_integral_boundary(&RationalExpr::identity(), &RationalExpr::simple_pole(p), DEFAULT_TOLERANCE)?;
    let cauchy = CertReport::at_most("residue.cauchy", (quad.value - Complex64::new(0.0, TAU)).norm(), 1e-10)
        .param("re", p.re)
        .param("im", p.im)
        .param("panels", quad.panels as f64)
        .sampled(1, seed);
    Ok(vec![pairs, cauchy])
}

/// Recomputes the boundary budget of the regular layer from the enumeration,
/// the deletion list and the truncation tails, without reading the ledger
/// sums, then checks both budget inequalities of the configuration.
pub fn check_budget(cfg: &CheeseConfig) -> Result<Vec<CertReport>> {
    let p = &cfg.params;
    let sq = Square::UNIT;
    let mut realized = vec![0.0; p.disc_count + 1];
    let mut wermer = 0.0;
    for d in &cfg.deletions {
        let s = dist_to_square_boundary(&d.disc, &sq);
        match d.provenance {
            Provenance::McKissick { l, .. } if l <= p.disc_count => realized[l] += d.disc.radius / (s * s),
            Provenance::McKissick { .. } => {}
            Provenance::Wermer { .. } => wermer += d.disc.boundary_length() / (s * s),
        }
    }
    let mut tails = 0.0;
    for (i, (exact, class)) in enumerate_admissible_discs(p.disc_count).into_iter().enumerate() {
        let d = exact.to_disc();
        let eps = epsilon_for_index(i + 1, class, cfg.budget_c0, &d)?;
        let m = select_start_index(eps * d.radius)?;
        let n_max = p.n_cap.max(m - 1);
        tails += boundary_from_cross(class, &d, inverse_square_tail(n_max) / d.radius);
    }
    let mck: f64 = realized.iter().sum::<f64>() + tails;
    let combined = 2.0 * PI * mck + wermer;
    let limit = cfg.budget_c / 2.0 + 2.0 * PI * cfg.budget_c0;
    let agree = (combined - cfg.ledger.combined_boundary_sum).abs() <= 1e-9 * combined.max(1e-300);
    let mut out = vec![
        CertReport::below("budget.regular", mck, cfg.budget_c0)
            .param("C0", cfg.budget_c0)
            .param("realized", mck - tails)
            .param("tail", tails)
            .param("indices", p.disc_count as f64)
            .sampled(cfg.deletions.len(), 0),
        CertReport::below("budget.combined", combined, limit)
            .param("C", cfg.budget_c)
            .param("wermer", wermer)
            .param("ledger", cfg.ledger.combined_boundary_sum)
            .sampled(cfg.deletions.len(), 0),
    ];
    if !agree {
        out[1] = out[1].clone().note("recomputed sum disagrees with the ledger");
        out.push(CertReport::at_most(
            "budget.ledger",
            (combined - cfg.ledger.combined_boundary_sum).abs(),
            1e-9 * combined,
        ));
    }
    Ok(out)
}

/// Center of a deleted disc to put the pole of `1/(z - p)` at: the first
/// domain of the second layer, else the first regular disc.
pub fn derivation_pole(cfg: &CheeseConfig) -> Option<Complex64> {
    cfg.wermer().next().or_else(|| cfg.mckissick().next()).map(|d| d.disc.center)
}

/// `D(f)(g) = ∮ f'g` for `f = z`, `g = 1/(z - p)` with `p` a deleted-disc
/// center: nonzero, equal to `2π` in modulus, and within the derivation
/// bounds at the first sampling density where both norm estimates settle.
pub fn check_derivation(cfg: &CheeseConfig, max_density: usize) -> Result<Vec<CertReport>> {
    let Some(p) = derivation_pole(cfg) else {
        return Ok(vec![CertReport::inapplicable("derivation", "configuration has no deleted discs")]);
    };
    let f = RationalExpr::identity();
    let g = RationalExpr::simple_pole(p);
    let mut density = 64;
    let mut last = sup_norm_estimate(&g, cfg, density)?.value;
    while density < max_density {
        let next = sup_norm_estimate(&g, cfg, 2 * density)?.value;
        density *= 2;
        let settled = (next - last).abs() <= 1e-6 * next;
        last = next;
        if settled {
            break;
        }
    }
    let (quad, [sum, constant]) = check_derivation_bound(&f, &g, cfg, density, DEFAULT_TOLERANCE)?;
    let value = quad.value.norm();
    let nonzero = CertReport::above("derivation.nonzero", value, 0.0)
        .param("re", p.re)
        .param("im", p.im)
        .param("error_estimate", quad.error_estimate);
    let exact = CertReport::at_most("derivation.exact", (value - TAU).abs(), 1e-9).param("value", value);
    let limit = cfg.budget_c / 2.0 + 2.0 * PI * cfg.budget_c0;
    let ledger = CertReport::below("derivation.ledger", cfg.ledger.combined_boundary_sum, limit)
        .param("integral_bound", cfg.ledger.integral_bound);
    Ok(vec![nonzero, exact, sum, constant, ledger])
}
