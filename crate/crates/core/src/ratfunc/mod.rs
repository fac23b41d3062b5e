//! The rational functions `h_N(z) = 1/(1 - z^N)`, the level functions `g_n`,
//! their products, and explicit rational expressions used as test functions.
//!
//! Powers `z^N` are carried in polar form: the natural log of the modulus and
//! the argument measured in turns. This keeps `g_n` meaningful for levels
//! whose `N = n·4^n` is far beyond what a double can hold, and keeps values
//! like `(m!)^{-4}` representable.

mod level;
mod logcomplex;
mod product;
mod ratexpr;

pub use level::LevelParams;
pub use logcomplex::LogComplex;
pub use product::{eval_f_limit, eval_product, ln_factorial, FLimit, ProductFunction};
pub use ratexpr::{Poly, RationalExpr};

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{CheeseError, Result};

/// `w^N` as `(ln|w^N|, arg(w^N) / 2π mod 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPower {
    pub ln_abs: f64,
    pub turns: f64,
}

/// Argument of `z` in turns, in `[0, 1)`.
pub(crate) fn turns_of(z: Complex64) -> f64 {
    (z.im.atan2(z.re) / TAU).rem_euclid(1.0)
}

fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// `frac(n · t)` by double-and-add, every doubling exact.
pub(crate) fn frac_mul(n: u64, t: f64) -> f64 {
    let mut acc = 0.0;
    let t = frac(t);
    for bit in (0..64).rev() {
        acc = frac(2.0 * acc);
        if (n >> bit) & 1 == 1 {
            acc = frac(acc + t);
        }
    }
    acc
}

/// `frac(2^k · t)`; bits shifted past the mantissa are gone, so this settles
/// at zero after at most ~1100 doublings.
pub(crate) fn frac_doublings(mut t: f64, k: u64) -> f64 {
    for _ in 0..k {
        if t == 0.0 {
            break;
        }
        t = frac(2.0 * t);
    }
    t
}

/// Working tolerance on `|1 - w^N|` below which `w` counts as a root of unity.
pub fn pole_tolerance(n_roots: f64) -> f64 {
    (16.0 * f64::EPSILON * n_roots).min(1e-3)
}

/// `1 - u` for `u = e^{ln_abs} e^{2πi turns}` in polar form, computed without
/// overflow and without cancellation near `u = 1`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct OneMinus {
    pub ln_abs: f64,
    pub arg: f64,
    /// `|1 - u|` when it is of moderate size, used for pole detection.
    pub abs: f64,
}

pub(crate) fn one_minus(u: PolarPower) -> OneMinus {
    let theta = TAU * u.turns;
    if u.ln_abs < -40.0 {
        let r = u.ln_abs.exp();
        let w = Complex64::new(1.0 - r * theta.cos(), -r * theta.sin());
        OneMinus {
            ln_abs: w.norm().ln(),
            arg: w.arg(),
            abs: w.norm(),
        }
    } else if u.ln_abs > 40.0 {
        // 1 - u = -u (1 - 1/u)
        let v = (-u.ln_abs).exp();
        let w = Complex64::new(1.0 - v * theta.cos(), v * theta.sin());
        OneMinus {
            ln_abs: u.ln_abs + w.norm().ln(),
            arg: wrap_phase(theta + PI + w.arg()),
            abs: f64::INFINITY,
        }
    } else {
        let r = u.ln_abs.exp();
        let half = 0.5 * theta;
        let re = -(u.ln_abs.exp_m1()) + 2.0 * r * half.sin() * half.sin();
        let im = -r * theta.sin();
        let w = Complex64::new(re, im);
        let abs = w.norm();
        OneMinus {
            ln_abs: abs.ln(),
            arg: w.arg(),
            abs,
        }
    }
}

pub(crate) fn wrap_phase(p: f64) -> f64 {
    let w = (p + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

/// `z^N` in polar form. Small exponents use repeated squaring on the complex
/// value; large ones work on `(ln|z|, arg z)`.
pub fn power_polar(n_roots: u64, z: Complex64) -> PolarPower {
    if n_roots <= 1 << 16 {
        let w = z.powu(n_roots as u32);
        if w.norm().is_finite() && w.norm() > 0.0 {
            return PolarPower {
                ln_abs: w.norm().ln(),
                turns: turns_of(w),
            };
        }
    }
    PolarPower {
        ln_abs: n_roots as f64 * z.norm().ln(),
        turns: frac_mul(n_roots, turns_of(z)),
    }
}

fn check_pole(om: &OneMinus, n_roots: f64, what: &str) -> Result<()> {
    if om.abs < pole_tolerance(n_roots) {
        return Err(CheeseError::Pole(format!(
            "{what}: |1 - w^N| = {:.3e} below working tolerance",
            om.abs
        )));
    }
    Ok(())
}

/// `h_N(z) = 1/(1 - z^N)` in log-polar form.
pub fn log_hn(n_roots: u64, z: Complex64) -> Result<LogComplex> {
    if n_roots < 2 {
        return Err(CheeseError::Precondition(format!("N must be at least 2, got {n_roots}")));
    }
    let om = one_minus(power_polar(n_roots, z));
    check_pole(&om, n_roots as f64, "h_N")?;
    Ok(LogComplex::new(-om.ln_abs, -om.arg))
}

/// `h_N(z) = 1/(1 - z^N)`.
pub fn eval_hn(n_roots: u64, z: Complex64) -> Result<Complex64> {
    let v = log_hn(n_roots, z)?.to_complex();
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(CheeseError::Domain(format!("h_N({z}) is not representable")));
    }
    Ok(v)
}

/// `1 - h_N(z) = -z^N / (1 - z^N)` in log-polar form.
pub fn log_one_minus_hn(n_roots: u64, z: Complex64) -> Result<LogComplex> {
    if n_roots < 2 {
        return Err(CheeseError::Precondition(format!("N must be at least 2, got {n_roots}")));
    }
    let u = power_polar(n_roots, z);
    let om = one_minus(u);
    check_pole(&om, n_roots as f64, "h_N")?;
    Ok(LogComplex::new(u.ln_abs - om.ln_abs, TAU * u.turns + PI - om.arg))
}

/// `g_n(z) = h_N(ω^{-1/2} z / shrink)` in log-polar form.
pub fn log_gn(p: &LevelParams, z: Complex64) -> Result<LogComplex> {
    let om = one_minus(p.scaled_power(z));
    check_pole(&om, p.roots_f64(), "g_n")?;
    Ok(LogComplex::new(-om.ln_abs, -om.arg))
}

/// `g_n(z)` as a complex value.
pub fn eval_gn(p: &LevelParams, z: Complex64) -> Result<Complex64> {
    let v = log_gn(p, z)?.to_complex();
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(CheeseError::Domain(format!("g_n({z}) is not representable")));
    }
    Ok(v)
}

/// `1 - g_n(z)` in log-polar form.
pub fn log_one_minus_gn(p: &LevelParams, z: Complex64) -> Result<LogComplex> {
    let u = p.scaled_power(z);
    let om = one_minus(u);
    check_pole(&om, p.roots_f64(), "g_n")?;
    Ok(LogComplex::new(u.ln_abs - om.ln_abs, TAU * u.turns + PI - om.arg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hn_examples() {
        assert_eq!(eval_hn(2, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let v = eval_hn(2, c(0.0, 2f64.sqrt())).unwrap();
        assert!((v - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        // bound (i): |z|^N = 2 so |h| <= 2 |z|^{-N} = 1
        assert!(v.norm() <= 1.0);
        assert!(matches!(eval_hn(4, c(1.0, 0.0)), Err(CheeseError::Pole(_))));
        assert!(matches!(eval_hn(4, c(0.0, 1.0)), Err(CheeseError::Pole(_))));
        assert!(eval_hn(1, c(0.5, 0.0)).is_err());
    }

    #[test]
    fn frac_mul_matches_integer_products() {
        for &(n, t) in &[(3u64, 0.125), (192, 0.3), (1 << 20, 0.2), (12345, 0.7071)] {
            let direct = (n as f64 * t).rem_euclid(1.0);
            let d = (frac_mul(n, t) - direct).abs();
            assert!(d.min(1.0 - d) < 1e-9 * n as f64, "n={n} t={t}");
        }
        assert_eq!(frac_doublings(0.375, 3), 0.0);
        assert_eq!(frac_doublings(0.375, 1), 0.75);
    }

    #[test]
    fn polar_and_direct_powers_agree() {
        // exponent above 2^16 takes the polar route; compare against powf
        let z = c(0.99999, 0.00001);
        let n = 70_000u64;
        let p = power_polar(n, z);
        let direct = z.powf(n as f64);
        assert!((p.ln_abs - direct.norm().ln()).abs() < 1e-9);
        let dt = (p.turns - turns_of(direct)).abs();
        assert!(dt.min(1.0 - dt) < 1e-9);
    }

    #[test]
    fn huge_magnitudes_stay_finite_in_log_form() {
        let h = log_hn(1 << 20, c(1.5, 0.0)).unwrap();
        assert!(h.log_magnitude.is_finite());
        assert!(h.log_magnitude < -400_000.0);
        let one_minus = log_one_minus_hn(1 << 20, c(0.5, 0.0)).unwrap();
        assert!(one_minus.log_magnitude < -700_000.0);
    }

    #[test]
    fn gn_examples() {
        let p = LevelParams::new(3).unwrap();
        assert_eq!(eval_gn(&p, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let pole = p.shrink() * Complex64::from_polar(1.0, std::f64::consts::PI / p.roots_f64());
        assert!(matches!(eval_gn(&p, pole), Err(CheeseError::Pole(_))));
    }

    #[test]
    fn gn_on_unit_circle_exceeds_level_bound_at_small_n() {
        // |g_3| on |z| = 1 is about 1/(e^{3.02} - 1) ~ 0.05, above 4^{-4}
        let p = LevelParams::new(3).unwrap();
        let mut max = 0.0f64;
        for k in 0..64 {
            let z = Complex64::from_polar(1.0, TAU * (k as f64 + 0.25) / 64.0);
            max = max.max(eval_gn(&p, z).unwrap().norm());
        }
        assert!(max > 0.046 && max < 0.052, "{max}");
        assert!(max > 4f64.powi(-4));
    }

    #[test]
    fn gn_is_hn_of_rotated_scaled_argument() {
        let p = LevelParams::new(2).unwrap();
        let rot = Complex64::from_polar(1.0 / p.shrink(), -std::f64::consts::PI / p.roots_f64());
        for k in 0..50 {
            let z = Complex64::from_polar(0.3 + 0.02 * k as f64, 0.37 * k as f64);
            let a = eval_gn(&p, z).unwrap();
            let b = eval_hn(p.roots().unwrap(), rot * z).unwrap();
            assert!((a - b).norm() <= 1e-11 * b.norm().max(1.0), "{z}: {a} vs {b}");
        }
    }
}
