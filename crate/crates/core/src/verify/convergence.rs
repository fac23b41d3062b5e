use num_complex::Complex64;
use rayon::prelude::*;

use super::report::CertReport;
use super::sampling::{Region, SamplePlan};
use crate::error::{CheeseError, Result};
use crate::ratfunc::{eval_f_limit, eval_product, ln_factorial, log_one_minus_gn, LevelParams, ProductFunction};

/// `K = ∏_{r>=1} (1 + (r+1)^{-4})` as an interval: the product up to
/// `r = 50`, and that times `exp(Σ_{r>50} (r+1)^{-4})` with the sum bounded
/// by `1/(3·51³)`.
pub fn k_interval() -> (f64, f64) {
    let trunc: f64 = (1..=50).map(|r| 1.0 + (r as f64 + 1.0).powi(-4)).product();
    let lo = trunc * (1.0 - 1e-15);
    let hi = trunc * (1.0 / (3.0 * 51f64.powi(3))).exp() * (1.0 + 1e-15);
    (lo, hi)
}

/// True when `z` lies in an open disc of some level in `m..=n_max`.
pub fn in_deleted_disc(z: Complex64, m: u64, n_max: u64) -> bool {
    (m..=n_max).any(|r| LevelParams::new(r).map(|p| p.in_some_disc(z)).unwrap_or(false))
}

/// Samples for the successive-difference check: the unit disc, the rings
/// carrying the discs of each level, and the exterior, all avoiding the
/// discs of levels `m..=n_max + 1`.
pub fn convergence_samples(m: u64, n_max: u64, count: usize, seed: u64) -> Result<Vec<Complex64>> {
    let mut regions = vec![Region::Annulus { inner: 0.0, outer: 1.25 }];
    for r in m..=n_max + 1 {
        let p = LevelParams::new(r)?;
        let (lo, hi) = p.annulus();
        regions.push(Region::Annulus { inner: lo, outer: hi });
        let c = Complex64::new(0.0, 0.0);
        regions.push(Region::Circle { center: c, radius: p.shrink() + 2.0 * p.disc_radius() });
    }
    let per = count.div_ceil(regions.len());
    let mut out = Vec::with_capacity(count);
    for (i, region) in regions.into_iter().enumerate() {
        let plan = SamplePlan::new(region, per, seed.wrapping_add(i as u64))?;
        out.extend(plan.points_where(|z| !in_deleted_disc(z, m, n_max + 1)));
    }
    out.truncate(count);
    Ok(out)
}

/// `max_z |f_{n+1}(z) - f_n(z)|·(n+1)²` for each `n` in `m..=n_max`,
/// compared with the lower end of the interval for `K`.
pub fn check_convergence_at(m: u64, n_max: u64, samples: &[Complex64], seed: u64) -> Result<CertReport> {
    if let Some(z) = samples.iter().find(|&&z| in_deleted_disc(z, m, n_max + 1)) {
        return Err(CheeseError::Precondition(format!("sample {z} lies in a deleted disc")));
    }
    let (k_lo, k_hi) = k_interval();
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for n in m..=n_max {
        let f = ProductFunction::new(m, n)?;
        let next = LevelParams::new(n + 1)?;
        let diffs = samples
            .par_iter()
            .map(|&z| {
                // f_{n+1} - f_n = f_n·(g_{n+1} - 1)
                let a = eval_product(&f, z)?;
                let b = log_one_minus_gn(&next, z)?;
                Ok((a.log_magnitude + b.log_magnitude).exp())
            })
            .collect::<Result<Vec<f64>>>()?;
        let max = diffs.into_iter().fold(0.0, f64::max);
        let scaled = max * (n as f64 + 1.0).powi(2);
        notes.push(format!("n = {n}: max difference {max:.6e}, times (n+1)^2 = {scaled:.6e}"));
        worst = worst.max(scaled);
    }
    let mut r = CertReport::at_most("convergence", worst, k_lo)
        .param("m", m as f64)
        .param("n_max", n_max as f64)
        .param("k_lower", k_lo)
        .param("k_upper", k_hi)
        .sampled(samples.len(), seed)
        .note("measured is max over n of (n+1)^2·max|f_(n+1) - f_n|, bound is the lower end of K");
    for n in notes {
        r = r.note(n);
    }
    Ok(r)
}

pub fn check_convergence(m: u64, n_max: u64, count: usize, seed: u64) -> Result<CertReport> {
    let samples = convergence_samples(m, n_max, count, seed)?;
    check_convergence_at(m, n_max, &samples, seed)
}

/// Certified positive lower bound on `|f(z)|` for the limit `f = lim f_n`.
pub fn check_nonvanishing(m: u64, n_max: u64, z: Complex64) -> Result<CertReport> {
    let f = ProductFunction::new(m, n_max)?;
    let lim = eval_f_limit(&f, z)?;
    let ln_lower = lim.ln_lower();
    let generic = -4.0 * ln_factorial(m) + lim.ln_generic_lower;
    Ok(CertReport::above("nonvanishing", ln_lower.exp(), 0.0)
        .param("m", m as f64)
        .param("n_max", n_max as f64)
        .param("re", z.re)
        .param("im", z.im)
        .param("ln_lower", ln_lower)
        .param("ln_upper", lim.ln_upper())
        .param("ln_generic_reference", generic)
        .note(if lim.generic_valid {
            "pointwise tail factors are within (r+1)^-4"
        } else {
            "pointwise tail factors exceed (r+1)^-4; only the pointwise bracket is certified"
        }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_interval_brackets_oracle() {
        // mpmath: ∏(1 + (r+1)^{-4}) = 1.0836799...
        let (lo, hi) = k_interval();
        assert!(lo <= 1.08368 && 1.08367 <= hi);
        assert!(hi - lo < 3e-6);
    }

    #[test]
    fn convergence_small_range() {
        let r = check_convergence(4, 5, 1000, 3).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.samples, 1000);
    }

    #[test]
    fn samples_inside_discs_are_rejected() {
        let p = LevelParams::new(4).unwrap();
        let bad = [Complex64::new(0.1, 0.0), p.center(3)];
        assert!(matches!(check_convergence_at(4, 5, &bad, 0), Err(CheeseError::Precondition(_))));
    }

    #[test]
    fn nonvanishing_examples() {
        let r = check_nonvanishing(4, 7, Complex64::new(0.0, 0.0)).unwrap();
        assert!(r.passed());
        let floor = -4.0 * ln_factorial(4) + crate::ratfunc::eval_f_limit(
            &ProductFunction::new(4, 7).unwrap(),
            Complex64::new(0.0, 0.0),
        )
        .unwrap()
        .ln_generic_lower;
        assert!(r.params["ln_lower"] >= floor - 1e-8);
        assert!(check_nonvanishing(4, 7, Complex64::new(0.5, 0.0)).unwrap().passed());
        assert!(matches!(
            check_nonvanishing(4, 7, Complex64::new(0.0, 1.0)),
            Err(CheeseError::Domain(_))
        ));
    }
}
