use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{CheeseError, Result};
use crate::geometry::Square;
use crate::ratfunc::RationalExpr;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
    pub converged: bool,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const PANEL_CAP: usize = 1 << 16;

// Kronrod nodes on [-1, 1]; odd indices are the Gauss nodes
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then(other.a.total_cmp(&self.a))
    }
}

fn gk15<F>(f: &F, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = half * XGK[j];
        let pair = f(mid - x)? + f(mid + x)?;
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).norm();
    Ok(Panel { a, b, value, error })
}

/// Adaptive Gauss–Kronrod integral of `f` over `[a, b]`, always splitting
/// the panel with the largest error estimate.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64, cap: usize) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut heap = BinaryHeap::new();
    heap.push(gk15(&f, a, b)?);
    let mut total_err: f64 = heap.iter().map(|p| p.error).sum();
    while total_err > tol && heap.len() < cap {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            heap.push(worst);
            break;
        }
        let left = gk15(&f, worst.a, mid)?;
        let right = gk15(&f, mid, worst.b)?;
        heap.push(left);
        heap.push(right);
        total_err = heap.iter().map(|p| p.error).sum();
    }
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = panels.iter().fold(Complex64::new(0.0, 0.0), |acc, p| acc + p.value);
    let error_estimate: f64 = panels.iter().map(|p| p.error).sum();
    Ok(QuadratureResult {
        value,
        error_estimate,
        panels: panels.len(),
        converged: error_estimate <= tol,
    })
}

/// `∮ F(z) dz` over the boundary of `square`, counterclockwise, one adaptive
/// integral per edge with a quarter of the tolerance each.
pub fn integrate_boundary<F>(integrand: F, square: &Square, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let [ll, ul, lr, ur] = square.corners();
    let edges = [(ll, lr), (lr, ur), (ur, ul), (ul, ll)];
    let mut total = QuadratureResult {
        value: Complex64::new(0.0, 0.0),
        error_estimate: 0.0,
        panels: 0,
        converged: true,
    };
    for (p, q) in edges {
        let dz = q - p;
        let r = integrate(|t| Ok(integrand(p + dz * t)? * dz), 0.0, 1.0, tol / 4.0, PANEL_CAP)?;
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.panels += r.panels;
        total.converged &= r.converged;
    }
    Ok(total)
}

/// `∮_{∂Q} f'(z) g(z) dz`.
pub fn contour_integral_boundary(f: &RationalExpr, g: &RationalExpr, tol: f64) -> Result<QuadratureResult> {
    let sq = Square::UNIT;
    let fp = f.derivative();
    for p in f.poles().into_iter().chain(g.poles()) {
        if sq.point_distance_to_boundary(p) < 1e-12 {
            return Err(CheeseError::PoleOnContour(p));
        }
    }
    let r = integrate_boundary(
        |z| {
            let a = fp.eval(z).map_err(|_| CheeseError::PoleOnContour(z))?;
            let b = g.eval(z).map_err(|_| CheeseError::PoleOnContour(z))?;
            Ok(a * b)
        },
        &sq,
        tol,
    )?;
    if r.converged {
        Ok(r)
    } else {
        Err(CheeseError::ToleranceNotMet(r))
    }
}

/// Distinct poles with multiplicities, merging roots closer than `tol`.
fn group_poles(poles: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for &p in poles {
        match groups.iter_mut().find(|(q, _)| (*q - p).norm() <= tol * (1.0 + q.norm())) {
            Some(g) => g.1 += 1,
            None => groups.push((p, 1)),
        }
    }
    groups
}

/// Coefficients of `P(p + w)` in powers of `w`, up to degree `k - 1`.
fn taylor_shift(coeffs: &[Complex64], p: Complex64, k: usize) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    let mut out = Vec::with_capacity(k);
    // repeated synthetic division by (z - p) yields the Taylor coefficients
    for _ in 0..k {
        if c.is_empty() {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let mut q = vec![Complex64::new(0.0, 0.0); c.len().saturating_sub(1)];
        let mut acc = Complex64::new(0.0, 0.0);
        for i in (0..c.len()).rev() {
            acc = acc * p + c[i];
            if i > 0 {
                q[i - 1] = acc;
            }
        }
        out.push(acc);
        c = q;
    }
    out
}

/// Power series quotient `a / b` up to degree `k - 1`.
fn series_divide(a: &[Complex64], b: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut q = vec![Complex64::new(0.0, 0.0); k];
    for i in 0..k {
        let mut s = a.get(i).copied().unwrap_or_default();
        for j in 1..=i {
            s -= b.get(j).copied().unwrap_or_default() * q[i - j];
        }
        q[i] = s / b[0];
    }
    q
}

/// Residues of a rational expression at its tracked poles: for a pole `p`
/// of order `k`, the coefficient of `w^{k-1}` in
/// `P(p+w) / (lead·∏_{other} (p + w - p_j))`.
pub fn residues(e: &RationalExpr) -> Vec<(Complex64, Complex64)> {
    let poles = e.poles();
    let groups = group_poles(&poles, 1e-10);
    let lead = e.denominator_lead();
    groups
        .iter()
        .map(|&(p, k)| {
            let num = taylor_shift(&e.numerator().0, p, k);
            let mut den = vec![lead];
            for &(q, kq) in &groups {
                if q == p {
                    continue;
                }
                for _ in 0..kq {
                    // multiply by (p - q) + w
                    let mut next = vec![Complex64::new(0.0, 0.0); den.len() + 1];
                    for (i, &d) in den.iter().enumerate() {
                        next[i] += d * (p - q);
                        next[i + 1] += d;
                    }
                    den = next;
                }
            }
            (p, series_divide(&num, &den, k)[k - 1])
        })
        .collect()
}

/// `2πi` times the residues of `f'g` at poles inside `Q`.
pub fn residue_oracle(f: &RationalExpr, g: &RationalExpr) -> Complex64 {
    let h = f.derivative().mul(g);
    let sq = Square::UNIT;
    let sum = residues(&h)
        .into_iter()
        .filter(|(p, _)| sq.contains_interior(*p))
        .fold(Complex64::new(0.0, 0.0), |acc, (_, r)| acc + r);
    Complex64::new(0.0, 2.0 * PI) * sum
}
