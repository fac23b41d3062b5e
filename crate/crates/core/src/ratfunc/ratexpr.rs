use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CheeseError, Result};

/// Complex polynomial, coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly(pub Vec<Complex64>);

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Poly(coeffs)
    }

    pub fn constant(c: Complex64) -> Self {
        Poly(vec![c])
    }

    /// `lead · ∏ (z - r)`.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut coeffs = vec![lead];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        Poly::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() == 1 {
            return Poly::constant(Complex64::new(0.0, 0.0));
        }
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Complex64::new(0.0, 0.0); self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        let zero = Complex64::new(0.0, 0.0);
        Poly::new(
            (0..len)
                .map(|k| *self.0.get(k).unwrap_or(&zero) + *other.0.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        Poly::new(self.0.iter().map(|&a| a * c).collect())
    }

    /// Roots by simultaneous Weierstrass (Durand–Kerner) iteration.
    pub fn roots(&self) -> Vec<Complex64> {
        let deg = self.degree();
        if deg == 0 {
            return Vec::new();
        }
        let lead = self.0[deg];
        let monic: Vec<Complex64> = self.0.iter().map(|&c| c / lead).collect();
        let monic = Poly(monic);
        let bound = 1.0 + monic.0[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let seed = Complex64::from_polar(0.4 * bound, 0.9);
        let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32 + 1)).collect();
        for _ in 0..500 {
            let mut moved = 0.0f64;
            for i in 0..deg {
                let zi = roots[i];
                let denom = roots
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(Complex64::new(1.0, 0.0), |acc, (_, &zj)| acc * (zi - zj));
                let step = monic.eval(zi) / denom;
                if step.norm().is_finite() {
                    roots[i] -= step;
                    moved = moved.max(step.norm());
                }
            }
            if moved < 1e-15 * bound {
                break;
            }
        }
        roots
    }
}

/// Ratio of two complex polynomials. The denominator's roots are tracked
/// when the expression is built from known factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalExpr {
    numerator: Poly,
    denominator: Poly,
    poles: Option<Vec<Complex64>>,
}

impl RationalExpr {
    pub fn new(numerator: Vec<Complex64>, denominator: Vec<Complex64>) -> Result<Self> {
        let denominator = Poly::new(denominator);
        if denominator.is_zero() {
            return Err(CheeseError::Degenerate("denominator is identically zero".into()));
        }
        let poles = (denominator.degree() == 0).then(Vec::new);
        Ok(RationalExpr {
            numerator: Poly::new(numerator),
            denominator,
            poles,
        })
    }

    /// `numerator / (lead · ∏ (z - p))`.
    pub fn from_poles(numerator: Vec<Complex64>, lead: Complex64, poles: Vec<Complex64>) -> Result<Self> {
        if lead == Complex64::new(0.0, 0.0) {
            return Err(CheeseError::Degenerate("leading coefficient is zero".into()));
        }
        Ok(RationalExpr {
            numerator: Poly::new(numerator),
            denominator: Poly::from_roots(lead, &poles),
            poles: Some(poles),
        })
    }

    pub fn constant(c: Complex64) -> Self {
        RationalExpr {
            numerator: Poly::constant(c),
            denominator: Poly::constant(Complex64::new(1.0, 0.0)),
            poles: Some(Vec::new()),
        }
    }

    pub fn identity() -> Self {
        RationalExpr {
            numerator: Poly(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]),
            denominator: Poly::constant(Complex64::new(1.0, 0.0)),
            poles: Some(Vec::new()),
        }
    }

    /// `1 / (z - p)`.
    pub fn simple_pole(p: Complex64) -> Self {
        RationalExpr {
            numerator: Poly::constant(Complex64::new(1.0, 0.0)),
            denominator: Poly::from_roots(Complex64::new(1.0, 0.0), &[p]),
            poles: Some(vec![p]),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    /// Leading coefficient of the denominator.
    pub fn denominator_lead(&self) -> Complex64 {
        self.denominator.0[self.denominator.degree()]
    }

    /// Roots of the denominator with multiplicity. Common factors with the
    /// numerator are not cancelled.
    pub fn poles(&self) -> Vec<Complex64> {
        match &self.poles {
            Some(p) => p.clone(),
            None => self.denominator.roots(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let den = self.denominator.eval(z);
        if den == Complex64::new(0.0, 0.0) {
            return Err(CheeseError::Pole(format!("denominator vanishes at {z}")));
        }
        let v = self.numerator.eval(z) / den;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(CheeseError::Pole(format!("non-finite value at {z}")));
        }
        Ok(v)
    }

    /// Quotient rule: `(P'Q - PQ') / Q²`.
    pub fn derivative(&self) -> RationalExpr {
        let p = &self.numerator;
        let q = &self.denominator;
        if q.degree() == 0 {
            return RationalExpr {
                numerator: p.derivative().scale(q.0[0].inv()),
                denominator: Poly::constant(Complex64::new(1.0, 0.0)),
                poles: Some(Vec::new()),
            };
        }
        let numerator = p.derivative().mul(q).add(&p.mul(&q.derivative()).scale(Complex64::new(-1.0, 0.0)));
        RationalExpr {
            numerator,
            denominator: q.mul(q),
            poles: self.poles.as_ref().map(|r| r.iter().chain(r.iter()).copied().collect()),
        }
    }

    pub fn mul(&self, other: &RationalExpr) -> RationalExpr {
        RationalExpr {
            numerator: self.numerator.mul(&other.numerator),
            denominator: self.denominator.mul(&other.denominator),
            poles: match (&self.poles, &other.poles) {
                (Some(a), Some(b)) => Some(a.iter().chain(b.iter()).copied().collect()),
                _ => None,
            },
        }
    }

    pub fn add(&self, other: &RationalExpr) -> RationalExpr {
        let numerator = self
            .numerator
            .mul(&other.denominator)
            .add(&other.numerator.mul(&self.denominator));
        RationalExpr {
            numerator,
            denominator: self.denominator.mul(&other.denominator),
            poles: match (&self.poles, &other.poles) {
                (Some(a), Some(b)) => Some(a.iter().chain(b.iter()).copied().collect()),
                _ => None,
            },
        }
    }

    pub fn scale(&self, c: Complex64) -> RationalExpr {
        RationalExpr {
            numerator: self.numerator.scale(c),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn derivative_of_simple_pole() {
        let p = c(0.3, 0.2);
        let d = RationalExpr::simple_pole(p).derivative();
        for z in [c(0.0, 0.0), c(1.0, -0.5), c(-0.7, 0.9)] {
            let expected = -(z - p).powi(-2);
            assert!((d.eval(z).unwrap() - expected).norm() < 1e-14 * expected.norm());
        }
        assert_eq!(d.poles(), vec![p, p]);
    }

    #[test]
    fn identity_evaluates_to_argument() {
        let z = c(0.5, 0.5);
        assert_eq!(RationalExpr::identity().eval(z).unwrap(), z);
        assert_eq!(RationalExpr::identity().derivative().eval(z).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn pole_evaluation_errors() {
        let e = RationalExpr::simple_pole(c(0.25, 0.0));
        assert!(matches!(e.eval(c(0.25, 0.0)), Err(CheeseError::Pole(_))));
        assert!(RationalExpr::new(vec![c(1.0, 0.0)], vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn degree_bookkeeping() {
        let e = RationalExpr::from_poles(vec![c(1.0, 0.0), c(2.0, 0.0)], c(1.0, 0.0), vec![c(0.1, 0.0), c(0.2, 0.0)]).unwrap();
        let d = e.derivative();
        assert_eq!(d.denominator().degree(), 4);
        // P'Q - PQ' has degree deg P + deg Q - 1 at most
        assert!(d.numerator().degree() <= 2);
        let poly = RationalExpr::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)], vec![c(2.0, 0.0)]).unwrap();
        let dp = poly.derivative();
        assert_eq!(dp.numerator().degree(), 1);
        assert_eq!(dp.eval(c(1.0, 0.0)).unwrap(), c(3.0, 0.0));
    }

    #[test]
    fn durand_kerner_recovers_roots() {
        let roots = [c(0.3, 0.2), c(-0.5, 0.1), c(0.0, -0.7)];
        let p = Poly::from_roots(c(2.0, -1.0), &roots);
        let mut found = p.roots();
        for r in roots {
            let (idx, best) = found
                .iter()
                .enumerate()
                .map(|(i, f)| (i, (f - r).norm()))
                .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
            assert!(best < 1e-12, "{r}");
            found.remove(idx);
        }
        let e = RationalExpr::new(vec![c(1.0, 0.0)], Poly::from_roots(c(1.0, 0.0), &roots).0).unwrap();
        assert_eq!(e.poles().len(), 3);
    }

    fn arb_point() -> impl Strategy<Value = Complex64> {
        (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b))
    }

    proptest! {
        #[test]
        fn derivative_matches_central_difference(
            p in arb_point(), q in arb_point(), a in arb_point(), z in arb_point()
        ) {
            prop_assume!((z - p).norm() > 0.2 && (z - q).norm() > 0.2);
            let e = RationalExpr::from_poles(vec![a, c(1.0, 0.0)], c(1.0, 0.0), vec![p, q]).unwrap();
            let exact = e.derivative().eval(z).unwrap();
            let h = 1e-6;
            let fd = (e.eval(z + h).unwrap() - e.eval(z - h).unwrap()) / (2.0 * h);
            prop_assert!((exact - fd).norm() <= 1e-6 * exact.norm().max(1.0));
        }
    }
}
