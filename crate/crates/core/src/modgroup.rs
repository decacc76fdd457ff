//! Upper half-plane points, reduction to the standard fundamental domain of
//! SL(2, Z), and the invariant height of a point.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest imaginary part accepted for reduction.
pub const MIN_HEIGHT: f64 = 1e-12;

/// Tolerance used when deciding membership of the closed fundamental domain.
pub const DOMAIN_TOL: f64 = 1e-12;

const MAX_STEPS: usize = 10_000;

/// A point x + iy of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
    /// Set when the point is known to lie in the closed fundamental domain.
    pub reduced: bool,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0 && y.is_finite() && x.is_finite()) {
            return Err(Error::Domain(format!("({x}, {y}) is not in the upper half-plane")));
        }
        Ok(HalfPlanePoint { x, y, reduced: false })
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// True when -1/2 <= x <= 1/2 and |z| >= 1, up to [`DOMAIN_TOL`].
    pub fn in_closed_domain(&self) -> bool {
        self.x.abs() <= 0.5 + DOMAIN_TOL && self.x * self.x + self.y * self.y >= 1.0 - DOMAIN_TOL
    }
}

impl fmt::Display for HalfPlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.x, self.y)
    }
}

/// An element (p q; r s) of SL(2, Z).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModularWord {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
}

impl ModularWord {
    pub const IDENTITY: ModularWord = ModularWord { p: 1, q: 0, r: 0, s: 1 };
    /// z -> -1/z
    pub const INVERSION: ModularWord = ModularWord { p: 0, q: -1, r: 1, s: 0 };

    /// Builds a word, rejecting matrices whose determinant is not 1.
    pub fn new(p: i64, q: i64, r: i64, s: i64) -> Result<Self> {
        let det = p as i128 * s as i128 - q as i128 * r as i128;
        if det != 1 {
            return Err(Error::Domain(format!("determinant of ({p} {q}; {r} {s}) is {det}")));
        }
        Ok(ModularWord { p, q, r, s })
    }

    /// z -> z + n
    pub fn translation(n: i64) -> Self {
        ModularWord { p: 1, q: n, r: 0, s: 1 }
    }

    pub fn det(&self) -> i128 {
        self.p as i128 * self.s as i128 - self.q as i128 * self.r as i128
    }

    /// Matrix product self * other (apply `other` first).
    pub fn mul(&self, other: &ModularWord) -> ModularWord {
        ModularWord {
            p: self.p * other.p + self.q * other.r,
            q: self.p * other.q + self.q * other.s,
            r: self.r * other.p + self.s * other.r,
            s: self.r * other.q + self.s * other.s,
        }
    }

    pub fn inverse(&self) -> ModularWord {
        ModularWord { p: self.s, q: -self.q, r: -self.r, s: self.p }
    }

    /// Moebius action (p z + q) / (r z + s).
    pub fn apply(&self, z: HalfPlanePoint) -> HalfPlanePoint {
        let w = z.to_complex();
        let image = (w * self.p as f64 + self.q as f64) / (w * self.r as f64 + self.s as f64);
        // Im(gz) = y / |rz + s|^2 keeps full relative precision
        let denom = (w * self.r as f64 + self.s as f64).norm_sqr();
        HalfPlanePoint { x: image.re, y: z.y / denom, reduced: false }
    }
}

impl fmt::Display for ModularWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.p, self.q, self.r, self.s)
    }
}

/// Maps z into the closed fundamental domain; returns the image and the
/// word g with g z equal to the image.
pub fn reduce_to_fundamental(z: HalfPlanePoint) -> Result<(HalfPlanePoint, ModularWord)> {
    if !(z.y > MIN_HEIGHT) || !z.x.is_finite() || !z.y.is_finite() {
        return Err(Error::Range(format!("height {} below {MIN_HEIGHT:e}", z.y)));
    }
    let (mut x, mut y) = (z.x, z.y);
    let mut word = ModularWord::IDENTITY;
    for _ in 0..MAX_STEPS {
        let n = x.round();
        if n != 0.0 {
            x -= n;
            word = ModularWord::translation(-(n as i64)).mul(&word);
        }
        let r2 = x * x + y * y;
        if r2 >= 1.0 {
            return Ok((HalfPlanePoint { x, y, reduced: true }, word));
        }
        x = -x / r2;
        y /= r2;
        word = ModularWord::INVERSION.mul(&word);
    }
    Err(Error::Convergence(format!("reduction of {z} did not terminate in {MAX_STEPS} steps")))
}

/// Height of the reduced representative of z.
pub fn invariant_height(z: HalfPlanePoint) -> Result<f64> {
    Ok(reduce_to_fundamental(z)?.0.y)
}
