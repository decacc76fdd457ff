//! Riemann and Hurwitz zeta functions by Euler–Maclaurin summation.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// B_{2k} / (2k)! for k = 1..=12.
const BERNOULLI_OVER_FACTORIAL: [f64; 12] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
    43_867.0 / 798.0 / 6_402_373_705_728_000.0,
    -174_611.0 / 330.0 / 2_432_902_008_176_640_000.0,
    854_513.0 / 138.0 / 1.124_000_727_777_607_7e21,
    -236_364_091.0 / 2730.0 / 6.204_484_017_332_394e23,
];

const MAX_TERMS: usize = 2_000_000;

/// Euler–Maclaurin with `n` direct terms; returns (value, size of the last correction).
fn hurwitz_em(s: Complex64, a: f64, n: usize) -> (Complex64, f64) {
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        sum += (-s * (k as f64 + a).ln()).exp();
    }
    let x = n as f64 + a;
    let lx = x.ln();
    let x_pow = (-s * lx).exp(); // x^{-s}
    sum += x_pow * x / (s - 1.0) + x_pow * 0.5;

    // (s)_{2k-1} x^{-s-2k+1}
    let mut rising = s;
    let mut term_pow = x_pow / x;
    let inv_x2 = 1.0 / (x * x);
    let mut last = 0.0;
    for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = rising * term_pow * *coeff;
        sum += term;
        last = term.norm();
        let j = 2.0 * k as f64 + 1.0;
        rising *= (s + j) * (s + j + 1.0);
        term_pow *= inv_x2;
    }
    (sum, last)
}

/// Hurwitz zeta: sum_{n >= 0} (n + a)^{-s}, analytically continued, for `a` in (0, 1].
pub fn hurwitz_zeta(s: Complex64, a: f64, tol: f64) -> Result<Complex64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain(format!("Hurwitz parameter {a} outside (0, 1]")));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("zeta has a pole at s = 1".into()));
    }
    let mut n = 20usize.max((2.0 * s.im.abs()).ceil() as usize).max((s.norm() / 2.0).ceil() as usize);
    loop {
        let (value, last) = hurwitz_em(s, a, n);
        // the remainder is bounded by a small multiple of the last retained correction
        let bound = 4.0 * last * (s + 25.0).norm() / (s.re + 25.0).max(1.0);
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Range(format!("zeta({s}) not finite")));
        }
        if bound <= tol * value.norm().max(1e-300) || bound <= tol {
            return Ok(value);
        }
        if n >= MAX_TERMS {
            return Err(Error::Accuracy(format!(
                "zeta({s}, {a}) tolerance {tol:e} not met with {n} terms (bound {bound:e})"
            )));
        }
        n *= 2;
    }
}

/// Riemann zeta function for |Im s| <= 2000.
pub fn zeta(s: Complex64, tol: f64) -> Result<Complex64> {
    if s.im.abs() > 2000.0 {
        return Err(Error::Range(format!("|Im s| = {} exceeds 2000", s.im.abs())));
    }
    hurwitz_zeta(s, 1.0, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn even_values() {
        assert!((zeta(c(2.0, 0.0), 1e-14).unwrap() - PI * PI / 6.0).norm() < 1e-14);
        assert!((zeta(c(4.0, 0.0), 1e-14).unwrap() - PI.powi(4) / 90.0).norm() < 1e-14);
        assert!((zeta(c(0.0, 0.0), 1e-14).unwrap() + 0.5).norm() < 1e-13);
        assert!((zeta(c(-1.0, 0.0), 1e-14).unwrap() + 1.0 / 12.0).norm() < 1e-13);
    }

    #[test]
    fn first_critical_zero() {
        let z = zeta(c(0.5, 14.134_725_141_734_695), 1e-12).unwrap();
        assert!(z.norm() < 1e-9, "{z}");
        assert!(zeta(c(0.5, 14.134725), 1e-12).unwrap().norm() < 1e-4);
    }

    #[test]
    fn hurwitz_special_cases() {
        let z2 = PI * PI / 6.0;
        assert!((hurwitz_zeta(c(2.0, 0.0), 1.0, 1e-14).unwrap() - z2).norm() < 1e-14);
        assert!((hurwitz_zeta(c(2.0, 0.0), 0.5, 1e-14).unwrap() - PI * PI / 2.0).norm() < 1e-13);
    }

    #[test]
    fn hurwitz_direct_summation_oracle() {
        // sum_{n<N} (n+1/4)^{-3} plus the integral tail and midpoint correction
        let a = 0.25;
        let n_terms = 200_000usize;
        let mut direct = 0.0f64;
        for n in (0..n_terms).rev() {
            direct += (n as f64 + a).powi(-3);
        }
        let x = n_terms as f64 + a;
        direct += 0.5 / (x * x) + 0.5 / x.powi(3);
        let got = hurwitz_zeta(c(3.0, 0.0), a, 1e-14).unwrap();
        assert!((got.re - direct).abs() < 1e-10, "{} vs {}", got.re, direct);
        assert!(got.im.abs() < 1e-15);
    }

    #[test]
    fn pole_and_bad_parameter() {
        assert!(matches!(zeta(c(1.0, 0.0), 1e-10), Err(Error::Pole(_))));
        assert!(matches!(hurwitz_zeta(c(2.0, 0.0), 0.0, 1e-10), Err(Error::Domain(_))));
        assert!(matches!(zeta(c(0.5, 3000.0), 1e-10), Err(Error::Range(_))));
    }
}
