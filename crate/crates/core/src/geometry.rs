//! Plane primitives: discs, axis-aligned squares, coordinate crosses and the
//! enumeration of admissible rational discs.

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{CheeseError, Result};

/// An open disc in the plane. The closed disc shares the same data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Complex64,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !center.re.is_finite() || !center.im.is_finite()
        {
            return Err(CheeseError::Degenerate(format!(
                "disc must have finite center and positive radius, got {center} / {radius}"
            )));
        }
        Ok(Disc { center, radius })
    }

    /// True when `z` lies in the open disc.
    pub fn contains_open(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// True when `z` lies in the closed disc.
    pub fn contains_closed(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }

    pub fn boundary_length(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.radius
    }

    /// Image under `z -> offset + scale * z`.
    pub fn affine(&self, offset: Complex64, scale: f64) -> Disc {
        Disc {
            center: offset + self.center * scale,
            radius: self.radius * scale,
        }
    }
}

/// Axis-aligned closed square `center + half_width * Q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Square {
    pub center: Complex64,
    pub half_width: f64,
}

impl Square {
    /// The closed unit square `[-1, 1] x [-1, 1]`.
    pub const UNIT: Square = Square {
        center: Complex64::new(0.0, 0.0),
        half_width: 1.0,
    };

    pub fn new(center: Complex64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(CheeseError::Degenerate(format!(
                "square half width must be positive, got {half_width}"
            )));
        }
        Ok(Square { center, half_width })
    }

    /// `scale * Q`, the square of half width `scale` about the origin.
    pub fn scaled_unit(scale: f64) -> Self {
        Square {
            center: Complex64::new(0.0, 0.0),
            half_width: scale,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let d = z - self.center;
        d.re.abs() <= self.half_width && d.im.abs() <= self.half_width
    }

    pub fn contains_interior(&self, z: Complex64) -> bool {
        let d = z - self.center;
        d.re.abs() < self.half_width && d.im.abs() < self.half_width
    }

    pub fn corners(&self) -> [Complex64; 4] {
        let h = self.half_width;
        [
            self.center + Complex64::new(-h, -h),
            self.center + Complex64::new(-h, h),
            self.center + Complex64::new(h, -h),
            self.center + Complex64::new(h, h),
        ]
    }

    /// Euclidean distance from a point to the boundary of the square.
    pub fn point_distance_to_boundary(&self, z: Complex64) -> f64 {
        let d = z - self.center;
        let (x, y) = (d.re.abs(), d.im.abs());
        let h = self.half_width;
        if x <= h && y <= h {
            (h - x).min(h - y)
        } else {
            let dx = (x - h).max(0.0);
            let dy = (y - h).max(0.0);
            dx.hypot(dy)
        }
    }

    /// Counterclockwise perimeter parameterization, `t` in `[0, 1)` starting
    /// at the lower-left corner.
    pub fn perimeter_point(&self, t: f64) -> Complex64 {
        let h = self.half_width;
        let s = t.rem_euclid(1.0) * 4.0;
        let side = s.floor() as u32;
        let u = -h + 2.0 * h * s.fract();
        let local = match side {
            0 => Complex64::new(u, -h),
            1 => Complex64::new(h, u),
            2 => Complex64::new(-u, h),
            _ => Complex64::new(-h, -u),
        };
        self.center + local
    }
}

/// The four corners `{-1-i, -1+i, 1-i, 1+i}` of `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CornerSet;

impl CornerSet {
    pub const POINTS: [Complex64; 4] = [
        Complex64::new(-1.0, -1.0),
        Complex64::new(-1.0, 1.0),
        Complex64::new(1.0, -1.0),
        Complex64::new(1.0, 1.0),
    ];

    pub fn distance(z: Complex64) -> f64 {
        Self::POINTS
            .iter()
            .map(|k| (z - k).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from a disc to the corner set, clamped at zero.
    pub fn disc_distance(d: &Disc) -> f64 {
        (Self::distance(d.center) - d.radius).max(0.0)
    }
}

/// Which of the three admissibility conditions a rational disc satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiscClass {
    /// Center in `int(Q)`, radius below the distance to `∂Q`.
    Interior,
    /// Center on `∂Q` away from the corners, radius below the distance to the corners.
    Edge,
    /// Center at a corner, radius below one.
    Corner,
}

/// Reference set for the budget quantity `Σ radius / s²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reference {
    SquareBoundary(Square),
    /// The lines `a + ℝ` and `a + iℝ`.
    Cross(Complex64),
}

impl Reference {
    pub fn distance(&self, d: &Disc) -> f64 {
        match *self {
            Reference::SquareBoundary(sq) => dist_to_square_boundary(d, &sq),
            Reference::Cross(a) => dist_to_cross(d, a),
        }
    }
}

/// Distance from the closed disc to `∂sq`; zero when the disc meets it.
pub fn dist_to_square_boundary(d: &Disc, sq: &Square) -> f64 {
    (sq.point_distance_to_boundary(d.center) - d.radius).max(0.0)
}

/// Distance from the closed disc to the cross `a + (ℝ ∪ iℝ)`.
pub fn dist_to_cross(d: &Disc, a: Complex64) -> f64 {
    let w = d.center - a;
    (w.re.abs().min(w.im.abs()) - d.radius).max(0.0)
}

/// `Σ radius / s²` against the chosen reference. Infinite as soon as one
/// disc touches the reference set.
pub fn budget_sum<'a, I>(discs: I, reference: Reference) -> f64
where
    I: IntoIterator<Item = &'a Disc>,
{
    let mut total = 0.0;
    for d in discs {
        let s = reference.distance(d);
        if s <= 0.0 {
            return f64::INFINITY;
        }
        total += d.radius / (s * s);
    }
    total
}

/// A closed disc with rational center and radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalDisc {
    pub re: Rational64,
    pub im: Rational64,
    pub radius: Rational64,
}

impl RationalDisc {
    pub fn new(re: Rational64, im: Rational64, radius: Rational64) -> Self {
        RationalDisc { re, im, radius }
    }

    pub fn to_disc(&self) -> Disc {
        Disc {
            center: Complex64::new(ratio_to_f64(self.re), ratio_to_f64(self.im)),
            radius: ratio_to_f64(self.radius),
        }
    }
}

impl std::fmt::Display for RationalDisc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "D({} + {}i, {})", self.re, self.im, self.radius)
    }
}

fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exact classification against the admissibility conditions. `None` means
/// the disc is rejected.
pub fn classify_disc(re: Rational64, im: Rational64, radius: Rational64) -> Option<DiscClass> {
    let zero = Rational64::from_integer(0);
    let one = Rational64::from_integer(1);
    if radius <= zero {
        return None;
    }
    let abs = |r: Rational64| if r < zero { -r } else { r };
    let (x, y) = (abs(re), abs(im));
    if x < one && y < one {
        // dist(z, ∂Q) = 1 - max(|x|, |y|)
        let dist = one - x.max(y);
        return (radius < dist).then_some(DiscClass::Interior);
    }
    if x > one || y > one {
        return None;
    }
    if x == one && y == one {
        return (radius < one).then_some(DiscClass::Corner);
    }
    // On an edge; the nearest corner is along that edge.
    let along = if x == one { y } else { x };
    (radius < one - along).then_some(DiscClass::Edge)
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic enumeration of all admissible rational discs.
///
/// A disc `((a + bi)/q, c/d)` is listed once, in canonical form
/// (`gcd(a, b, q) = 1`, `gcd(c, d) = 1`), ordered by the height `q + d + c`
/// and then lexicographically by `(q, d, a, b)`.
#[derive(Debug, Clone, Default)]
pub struct AdmissibleDiscs {
    height: i64,
    pending: std::collections::VecDeque<(RationalDisc, DiscClass)>,
}

impl AdmissibleDiscs {
    pub fn new() -> Self {
        AdmissibleDiscs {
            height: 2,
            pending: Default::default(),
        }
    }

    fn fill_next_height(&mut self) {
        self.height += 1;
        let h = self.height;
        for q in 1..=h - 2 {
            for d in 1..=h - 1 - q {
                let c = h - q - d;
                // admissible radii are all below one
                if c >= d || gcd(c, d) != 1 {
                    continue;
                }
                let radius = Rational64::new(c, d);
                for a in -q..=q {
                    for b in -q..=q {
                        if gcd(gcd(a, b), q) != 1 {
                            continue;
                        }
                        let re = Rational64::new(a, q);
                        let im = Rational64::new(b, q);
                        if let Some(class) = classify_disc(re, im, radius) {
                            self.pending
                                .push_back((RationalDisc::new(re, im, radius), class));
                        }
                    }
                }
            }
        }
    }
}

impl Iterator for AdmissibleDiscs {
    type Item = (RationalDisc, DiscClass);

    fn next(&mut self) -> Option<Self::Item> {
        while self.pending.is_empty() {
            self.fill_next_height();
        }
        self.pending.pop_front()
    }
}

/// The first `count` admissible discs; entry `l - 1` is the disc `D_l`.
pub fn enumerate_admissible_discs(count: usize) -> Vec<(RationalDisc, DiscClass)> {
    AdmissibleDiscs::new().take(count).collect()
}
