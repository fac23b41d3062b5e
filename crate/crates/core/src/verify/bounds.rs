use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{LN_2, PI, TAU};

use super::report::CertReport;
use super::sampling::{Kronecker, Region, SamplePlan};
use crate::construction::build_level_family;
use crate::error::{CheeseError, Result};
use crate::geometry::{budget_sum, Reference};
use crate::ratfunc::{log_gn, log_hn, log_one_minus_gn, log_one_minus_hn, power_polar, LevelParams};

/// `|h_N(z)| / (2|z|^{-N})`, at most one when `|z|^N >= 2`.
pub fn outer_ratio(n_roots: u64, z: Complex64) -> Result<f64> {
    let ln_u = power_polar(n_roots, z).ln_abs;
    let ln_h = log_hn(n_roots, z)?.log_magnitude;
    Ok((ln_h + ln_u - LN_2).exp())
}

/// `|1 - h_N(z)| / (2|z|^N)`, at most one when `|z|^N <= 1/2`. At `z = 0`
/// both sides vanish and the ratio is taken as one.
pub fn inner_ratio(n_roots: u64, z: Complex64) -> Result<f64> {
    let ln_u = power_polar(n_roots, z).ln_abs;
    if ln_u == f64::NEG_INFINITY {
        return Ok(1.0);
    }
    let ln_d = log_one_minus_hn(n_roots, z)?.log_magnitude;
    Ok((ln_d - ln_u - LN_2).exp())
}

/// Distance from `z` to the nearest `N`-th root of unity.
pub fn root_distance(n_roots: u64, z: Complex64) -> f64 {
    let n = n_roots as f64;
    let j = (z.arg() / TAU * n).round().rem_euclid(n);
    (z - Complex64::from_polar(1.0, TAU * j / n)).norm()
}

fn max_of<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(f64::INFINITY, f64::min)
}

/// The three estimates for `h_N`: decay outside the unit circle, closeness
/// to one inside it, and the bound `2/δ` away from the roots of unity.
pub fn check_h_bounds(n_roots: u64, delta: f64, count: usize, seed: u64) -> Result<[CertReport; 3]> {
    if n_roots < 2 {
        return Err(CheeseError::Precondition(format!("N must be at least 2, got {n_roots}")));
    }
    let n = n_roots as f64;

    let outer = SamplePlan::new(
        Region::Annulus { inner: (LN_2 / n).exp(), outer: (8.0 * LN_2 / n).exp() },
        count,
        seed,
    )?;
    let pts = outer.points_where(|z| power_polar(n_roots, z).ln_abs >= LN_2);
    let ratios = pts.par_iter().map(|&z| outer_ratio(n_roots, z)).collect::<Result<Vec<_>>>()?;
    let r_outer = CertReport::at_most("h.outer", max_of(ratios), 1.0)
        .param("N", n)
        .sampled(pts.len(), seed)
        .note("measured is max |h_N(z)| / (2|z|^-N) over |z|^N >= 2");

    let inner = SamplePlan::new(Region::Annulus { inner: 0.0, outer: (-LN_2 / n).exp() }, count, seed)?;
    let pts = inner.points_where(|z| power_polar(n_roots, z).ln_abs <= -LN_2);
    let ratios = pts.par_iter().map(|&z| inner_ratio(n_roots, z)).collect::<Result<Vec<_>>>()?;
    let r_inner = CertReport::at_most("h.inner", max_of(ratios), 1.0)
        .param("N", n)
        .sampled(pts.len(), seed)
        .note("measured is max |1 - h_N(z)| / (2|z|^N) over |z|^N <= 1/2");

    let threshold = (8.0 * n.ln()).recip();
    let r_sep = if !(delta > 0.0 && delta < threshold) {
        CertReport::inapplicable(
            "h.separated",
            &format!("requires 0 < delta < 1/(8 ln N) = {threshold:.6e}, got {delta:.6e}"),
        )
        .param("N", n)
        .param("delta", delta)
    } else {
        let sep = delta / n;
        let seq = Kronecker::new(seed);
        let pts: Vec<Complex64> = (0..count)
            .map(|k| {
                let (u, v) = seq.two(k);
                if k % 2 == 0 {
                    // hug a root of unity at the minimal separation
                    let j = (u * n).floor();
                    let w = Complex64::from_polar(1.0, TAU * j / n);
                    w + Complex64::from_polar(sep * (1.0 + 2.0 * seq.one(k)), TAU * v)
                } else {
                    Complex64::from_polar(0.5 + u, TAU * v)
                }
            })
            .filter(|&z| root_distance(n_roots, z) >= sep)
            .collect();
        let mags = pts
            .par_iter()
            .map(|&z| log_hn(n_roots, z).map(|l| l.abs()))
            .collect::<Result<Vec<_>>>()?;
        CertReport::at_most("h.separated", max_of(mags), 2.0 / delta)
            .param("N", n)
            .param("delta", delta)
            .sampled(pts.len(), seed)
    };
    Ok([r_outer, r_inner, r_sep])
}

/// `ln q` for `q = (ρ / shrink)^N`, the modulus of the scaled power on `|z| = ρ`.
fn ln_ring_power(p: &LevelParams, ln_rho: f64) -> f64 {
    p.roots_f64() * (ln_rho - p.ln_shrink())
}

/// Exact `sup |g_n|` on `|z| = 1 - 2^{-(2n+1)}`, which is `1/(q - 1)`.
pub fn outer_ring_sup(n: u64) -> Result<f64> {
    let p = LevelParams::new(n)?;
    let ln_q = ln_ring_power(&p, libm::log1p(-libm::ldexp(1.0, -(2 * n as i32 + 1))));
    Ok(1.0 / ln_q.exp_m1())
}

/// Exact `sup |1 - g_n|` and `sup |1 - h_N|` on `|z| <= 1 - 2^{-(2n-1)}`,
/// both of the form `q/(1 - q)`.
pub fn inner_disc_sup(n: u64) -> Result<(f64, f64)> {
    let p = LevelParams::new(n)?;
    let ln_rho = libm::log1p(-libm::ldexp(1.0, -(2 * n as i32 - 1)));
    let g = {
        let q = ln_ring_power(&p, ln_rho).exp();
        q / (1.0 - q)
    };
    let h = {
        let q = (p.roots_f64() * ln_rho).exp();
        q / (1.0 - q)
    };
    Ok((g, h))
}

fn first_level_where<F: Fn(u64) -> bool>(holds: F) -> Option<u64> {
    (2..=400).find(|&n| holds(n))
}

/// Smallest level at which the outer-ring estimate holds, from the exact
/// ring supremum.
pub fn outer_threshold() -> Option<u64> {
    first_level_where(|n| outer_ring_sup(n).map(|s| s <= (n as f64 + 1.0).powi(-4)).unwrap_or(false))
}

/// Smallest levels at which the inner estimate holds for `g_n` and for `h_N`.
pub fn inner_thresholds() -> (Option<u64>, Option<u64>) {
    let ok = |n: u64, pick: fn((f64, f64)) -> f64| {
        inner_disc_sup(n).map(|s| pick(s) <= (n as f64 + 1.0).powi(-4)).unwrap_or(false)
    };
    (first_level_where(|n| ok(n, |s| s.0)), first_level_where(|n| ok(n, |s| s.1)))
}

fn verdict_word(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "fails"
    }
}

/// All clauses for the level-`n` family and its function `g_n`, in order:
/// budget, poles, outer ring, inner disc, near-pole bound, non-vanishing,
/// annulus containment.
pub fn check_level_family(n: u64, count: usize, seed: u64) -> Result<Vec<CertReport>> {
    let fam = build_level_family(n)?;
    let p = fam.params;
    let nf = n as f64;
    let n_roots = fam.len() as u64;
    let radius = p.disc_radius();
    let target = (nf + 1.0).powi(-4);
    let mut out = Vec::with_capacity(7);

    let budget = budget_sum(&fam.discs, Reference::Cross(Complex64::new(0.0, 0.0)));
    out.push(
        CertReport::below("level.budget", budget, nf.powi(-2))
            .param("n", nf)
            .param("N", n_roots as f64)
            .sampled(fam.len(), 0)
            .note("exhaustive sum of radius / s_0^2")
            .note(format!("coarse proof threshold n > 32·π²/6 ≈ {:.1} not needed here", 32.0 * PI * PI / 6.0)),
    );

    // the k-th pole is shrink·ω^{1/2}·ω^k, built from the root of unity
    let half = Complex64::from_polar(p.shrink(), PI / n_roots as f64);
    let worst_pole = (0..n_roots)
        .into_par_iter()
        .map(|k| {
            let pole = half * Complex64::from_polar(1.0, TAU * k as f64 / n_roots as f64);
            (pole - fam.discs[k as usize].center).norm()
        })
        .reduce(|| 0.0, f64::max);
    out.push(
        CertReport::below("level.poles", worst_pole, radius)
            .param("n", nf)
            .sampled(fam.len(), 0)
            .note("measured is the largest distance from a pole to its disc center"),
    );

    // outer ring
    let eighth = libm::ldexp(1.0, -(2 * n as i32 + 1));
    let radii = [1.0 - eighth, 1.0, 1.0 + eighth];
    let mut nonzero_pts = Vec::new();
    let mut ring = Vec::new();
    for (i, &rho) in radii.iter().enumerate() {
        let plan = SamplePlan::new(Region::Circle { center: Complex64::new(0.0, 0.0), radius: rho }, count, seed + i as u64)?;
        ring.extend(plan.points());
    }
    let mags = ring.par_iter().map(|&z| log_gn(&p, z).map(|l| l.abs())).collect::<Result<Vec<_>>>()?;
    let exact = outer_ring_sup(n)?;
    let mut r = CertReport::at_most("level.outer", max_of(mags.iter().copied()), target)
        .param("n", nf)
        .param("ring_sup", exact)
        .sampled(ring.len(), seed)
        .note(format!("exact sup on the inner circle is 1/(q-1) = {exact:.6e}"));
    if let Some(t) = outer_threshold() {
        r = r.param("smallest_n", t as f64).note(format!("holds from n = {t}"));
    }
    out.push(r);
    nonzero_pts.extend(ring);

    // inner disc, literal h_N reading plus the g_n reading
    let rho_in = 1.0 - libm::ldexp(1.0, -(2 * n as i32 - 1));
    let mut inner = SamplePlan::new(Region::Circle { center: Complex64::new(0.0, 0.0), radius: rho_in }, count, seed)?.points();
    inner.extend(SamplePlan::new(Region::Annulus { inner: 0.0, outer: rho_in }, count, seed + 7)?.points());
    let h_vals = inner
        .par_iter()
        .map(|&z| log_one_minus_hn(n_roots, z).map(|l| l.abs()))
        .collect::<Result<Vec<_>>>()?;
    let g_vals = inner
        .par_iter()
        .map(|&z| log_one_minus_gn(&p, z).map(|l| l.abs()))
        .collect::<Result<Vec<_>>>()?;
    let g_max = max_of(g_vals);
    let (thr_g, thr_h) = inner_thresholds();
    let mut r = CertReport::at_most("level.inner", max_of(h_vals), target)
        .param("n", nf)
        .param("g_reading_measured", g_max)
        .sampled(inner.len(), seed)
        .note("verdict uses |1 - h_N| as written")
        .note(format!("|1 - g_n| reading: measured {g_max:.6e}, {}", verdict_word(g_max <= target)));
    if let Some(t) = thr_h {
        r = r.param("smallest_n", t as f64);
    }
    if let Some(t) = thr_g {
        r = r.param("smallest_n_g_reading", t as f64).note(format!("g_n reading holds from n = {t}"));
    }
    out.push(r);
    nonzero_pts.extend(inner);

    // just outside the discs
    let seq = Kronecker::new(seed);
    let near: Vec<Complex64> = (0..count)
        .map(|k| {
            let (u, v) = seq.two(k);
            let d = &fam.discs[((u * fam.len() as f64) as usize).min(fam.len() - 1)];
            d.center + Complex64::from_polar(radius * (1.0 + 1e-12), TAU * v)
        })
        .collect();
    let near_mags = near.par_iter().map(|&z| log_gn(&p, z).map(|l| l.abs())).collect::<Result<Vec<_>>>()?;
    let sup = max_of(near_mags);
    let a = nf.powi(4) * libm::ldexp(1.0, 2 * n as i32 + 1);
    let b = nf.powi(3) * libm::ldexp(1.0, 2 * n as i32 + 1);
    let support = if sup <= b {
        "consistent with both exponents"
    } else if sup <= a {
        "supports n^4 and rules out n^3"
    } else {
        "exceeds both candidates"
    };
    out.push(
        CertReport::at_most("level.near_pole", sup, a)
            .param("n", nf)
            .param("bound_n3", b)
            .param("scaled", sup / (nf.powi(4) * libm::ldexp(1.0, 2 * n as i32)))
            .sampled(near.len(), seed)
            .note(format!("against n^3·2^(2n+1) = {b:.6e}: {}", verdict_word(sup <= b)))
            .note(support)
            .note(format!(
                "disc radius {radius:.3e} is below the separation delta/N = {:.3e} of the h_N estimate",
                p.delta() / p.roots_f64()
            )),
    );
    nonzero_pts.extend(near);

    let smallest = nonzero_pts
        .par_iter()
        .map(|&z| log_gn(&p, z).map(|l| l.abs()))
        .collect::<Result<Vec<_>>>()?;
    out.push(
        CertReport::above("level.nonzero", min_of(smallest), 0.0)
            .param("n", nf)
            .sampled(nonzero_pts.len(), seed)
            .note("g_n = 1/(1 - u) never vanishes; measured is the smallest sampled |g_n|"),
    );

    let (lo, hi) = p.annulus();
    let slack = fam
        .discs
        .par_iter()
        .map(|d| {
            let m = d.center.norm();
            (m - d.radius - lo).min(hi - m - d.radius)
        })
        .reduce(|| f64::INFINITY, f64::min);
    out.push(
        CertReport::at_least("level.annulus", slack, 0.0)
            .param("n", nf)
            .param("inner", lo)
            .param("outer", hi)
            .sampled(fam.len(), 0)
            .note("measured is the smallest gap between a disc and the annulus edges"),
    );
    Ok(out)
}
