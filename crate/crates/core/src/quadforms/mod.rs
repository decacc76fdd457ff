//! Binary quadratic forms: reduction and composition, class groups with
//! their characters, Heegner points, closed geodesics and fundamental units.

mod cache;
mod definite;
mod group;
mod indefinite;
mod roots;

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::modgroup::HalfPlanePoint;

pub use cache::{cache_path, load_or_build, read_cache_file, write_cache_file, CacheOutcome};
pub use definite::{compose, enumerate_reduced, reduce_definite};
pub use group::{class_group, ClassGroupData, MAX_ABS_DISCRIMINANT};
pub use indefinite::{
    enumerate_reduced_indefinite, fundamental_unit, geodesic_cycle, is_reduced_indefinite, narrow_cycles,
    reduce_indefinite, GeodesicCycle, UnitData,
};
pub use roots::for_each_ideal_form;

/// A discriminant D = 0 or 1 (mod 4), D not a square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Discriminant {
    value: i64,
    fundamental: bool,
}

impl Discriminant {
    pub fn new(value: i64) -> Result<Self> {
        if value.rem_euclid(4) > 1 {
            return Err(Error::Domain(format!("{value} is not 0 or 1 mod 4")));
        }
        if value >= 0 && isqrt(value as u64).pow(2) == value as u64 {
            return Err(Error::Domain(format!("{value} is a square")));
        }
        Ok(Discriminant { value, fundamental: is_fundamental(value) })
    }

    /// Builds a discriminant and insists that it be fundamental.
    pub fn fundamental(value: i64) -> Result<Self> {
        let d = Discriminant::new(value)?;
        if !d.fundamental {
            return Err(Error::Domain(format!("{value} is not a fundamental discriminant")));
        }
        Ok(d)
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn is_fundamental(&self) -> bool {
        self.fundamental
    }

    pub fn is_negative(&self) -> bool {
        self.value < 0
    }

    pub fn abs(&self) -> u64 {
        self.value.unsigned_abs()
    }

    /// Number of roots of unity in the ring of integers (imaginary fields only).
    pub fn omega(&self) -> Option<u32> {
        match self.value {
            -3 => Some(6),
            -4 => Some(4),
            v if v < 0 => Some(2),
            _ => None,
        }
    }

    /// Principal form (1, D mod 2, (D mod 2 - D)/4).
    pub fn principal_form(&self) -> QuadraticForm {
        let b = self.value.rem_euclid(2);
        QuadraticForm { a: 1, b, c: (b - self.value) / 4 }
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// D squarefree with D = 1 (mod 4), or D = 4m with m squarefree and m = 2, 3 (mod 4).
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// All fundamental discriminants in [lo, hi], ascending.
pub fn fundamental_discriminants(lo: i64, hi: i64) -> Vec<Discriminant> {
    (lo..=hi).filter(|&d| is_fundamental(d)).map(|d| Discriminant { value: d, fundamental: true }).collect()
}

/// floor(sqrt(n)) computed exactly.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// The form a x^2 + b x y + c y^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadraticForm { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// f(p x + q y, r x + s y) for the matrix (p q; r s).
    pub fn transform(&self, m: &crate::modgroup::ModularWord) -> QuadraticForm {
        let (p, q, r, s) = (m.p, m.q, m.r, m.s);
        QuadraticForm {
            a: self.eval(p, r),
            b: 2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s,
            c: self.eval(q, s),
        }
    }

    /// (a, -b, c), the inverse class.
    pub fn opposite(&self) -> QuadraticForm {
        QuadraticForm { a: self.a, b: -self.b, c: self.c }
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Kronecker symbol (d / n).
pub fn kronecker_chi(d: i64, n: i64) -> i32 {
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n;
    if n < 0 {
        n = -n;
        if d < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            result = -result;
        }
        n >>= twos;
    }
    result * jacobi(d.rem_euclid(n), n)
}

/// Jacobi symbol (a / n) for odd n > 0 and 0 <= a < n.
fn jacobi(mut a: i64, mut n: i64) -> i32 {
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Number of b in (0, 2a] with b^2 = D (mod 4a).
pub fn rho(d: i64, a: u64) -> u64 {
    let modulus = 4 * a as i128;
    let target = (d as i128).rem_euclid(modulus);
    (1..=2 * a as i128).filter(|b| (b * b) % modulus == target).count() as u64
}

/// Root (-b + i sqrt|D|) / (2a) of a positive definite form.
pub fn heegner_point(f: &QuadraticForm) -> Result<HalfPlanePoint> {
    let d = f.disc();
    if d >= 0 || f.a <= 0 {
        return Err(Error::Domain(format!("{f} is not positive definite")));
    }
    let two_a = 2.0 * f.a as f64;
    HalfPlanePoint::new(-(f.b as f64) / two_a, ((-d) as f64).sqrt() / two_a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_chi(-4, 3), -1);
        assert_eq!(kronecker_chi(-4, 5), 1);
        assert_eq!(kronecker_chi(-4, 2), 0);
        assert_eq!(kronecker_chi(5, 1), 1);
        assert_eq!(kronecker_chi(5, 2), -1);
        assert_eq!(kronecker_chi(8, 3), -1);
        assert_eq!(kronecker_chi(-23, 2), 1);
        for n in 1..100 {
            assert_eq!(kronecker_chi(5, n), kronecker_chi(5, n + 5));
        }
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(-23, 1), 1);
        assert_eq!(rho(17, 1), 1);
        assert_eq!(rho(-23, 2), 2);
        assert_eq!(rho(-4, 2), 1);
    }

    #[test]
    fn discriminants() {
        assert!(Discriminant::fundamental(-23).is_ok());
        assert!(Discriminant::fundamental(-16).is_err());
        assert!(Discriminant::fundamental(12).is_ok());
        assert!(Discriminant::new(-5).is_err());
        assert!(Discriminant::new(9).is_err());
        assert_eq!(fundamental_discriminants(-24, -3).iter().map(|d| d.value()).collect::<Vec<_>>(), vec![-24, -23, -20, -19, -15, -11, -8, -7, -4, -3]);
    }

    #[test]
    fn heegner_examples() {
        let z = heegner_point(&QuadraticForm::new(1, 0, 1)).unwrap();
        assert_eq!((z.x, z.y), (0.0, 1.0));
        let z = heegner_point(&QuadraticForm::new(2, 1, 3)).unwrap();
        assert!((z.x + 0.25).abs() < 1e-15 && (z.y - 23f64.sqrt() / 4.0).abs() < 1e-15);
        assert!(heegner_point(&QuadraticForm::new(1, 1, -1)).is_err());
    }
}
