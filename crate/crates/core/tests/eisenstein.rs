use hecke_core::eisenstein::{eisenstein, fourier_row, scattering_phi, truncation_length, BRIDGE_FACTOR};
use hecke_core::epstein::{epstein_direct, GramMatrix};
use hecke_core::numerics::zeta;
use hecke_core::HalfPlanePoint;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn e(x: f64, y: f64, s: Complex64) -> Complex64 {
    eisenstein(HalfPlanePoint::new(x, y).unwrap(), s, 1e-12).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn periodic_in_x(x in -0.5f64..0.5, y in 0.3f64..3.0, sigma in 0.5f64..3.0, t in -40.0f64..40.0) {
        prop_assume!((c(sigma, t) - 1.0).norm() > 0.1);
        let s = c(sigma, t);
        let (a, b) = (e(x, y, s), e(x + 1.0, y, s));
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0));
    }

    #[test]
    fn invariant_under_inversion(x in -0.5f64..0.5, y in 0.5f64..2.0, t in -30.0f64..30.0) {
        let s = c(0.5, t);
        let r2 = x * x + y * y;
        let (a, b) = (e(x, y, s), e(-x / r2, y / r2, s));
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0));
    }

    #[test]
    fn conjugation_on_critical_line(x in -0.5f64..0.5, y in 0.9f64..5.0, t in 0.5f64..100.0) {
        let a = e(x, y, c(0.5, t));
        let b = e(x, y, c(0.5, -t));
        prop_assert!((a.conj() - b).norm() <= 1e-10 * a.norm().max(1.0));
    }
}

#[test]
fn bridge_identity_off_the_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let x: f64 = rng.gen_range(-0.5..0.5);
        let y: f64 = rng.gen_range((1.0 - x * x).sqrt()..3.0);
        let s = c(2.0, rng.gen_range(0.0..10.0));
        let lhs = e(x, y, s) * zeta(2.0 * s, 1e-15).unwrap() * BRIDGE_FACTOR;
        let z = GramMatrix::new(x * x + y * y, x).unwrap();
        let rhs = (s * y.ln()).exp() * epstein_direct(&z, s, 1e-10).unwrap();
        assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm(), "z={x}+{y}i s={s}: {lhs} vs {rhs}");
    }
}

#[test]
fn scattering_coefficient_from_lattice_sum() {
    // at y = 3 the constant term is y^2 + phi(2) y^{-1}; the oscillating part is
    // known from the Fourier coefficients
    let (y, s) = (3.0, c(2.0, 0.0));
    let z = GramMatrix::new(y * y, 0.0).unwrap();
    let lattice = epstein_direct(&z, s, 1e-10).unwrap() * y * y / (BRIDGE_FACTOR * zeta(2.0 * s, 1e-15).unwrap());
    let row = fourier_row(y, s, 1e-15).unwrap();
    let oscillating: Complex64 = row.coefficients.iter().sum();
    let phi = (lattice - y * y - oscillating) * y;
    let want = scattering_phi(s).unwrap();
    assert!((phi - want).norm() <= 1e-8 * want.norm(), "{phi} vs {want}");
}

#[test]
fn large_height_remainder_decays() {
    for t in [1.0, 10.0, 50.0] {
        let s = c(0.5, t);
        let mut constants = Vec::new();
        for k in 0..=25 {
            let y = 5.0 + k as f64;
            let row = fourier_row(y, s, 1e-14).unwrap();
            let oscillating: Complex64 = row.coefficients.iter().sum();
            let remainder = oscillating.norm() + row.tail_bound;
            constants.push(remainder * (std::f64::consts::PI * y).exp());
        }
        let c_t = constants.iter().cloned().fold(0.0, f64::max);
        assert!(c_t.is_finite(), "t={t}");
        // the remainder decays like e^{-2 pi y}, so the fitted constant settles
        assert!(constants.last().unwrap() <= &c_t);
    }
}

#[test]
fn trivial_bound_on_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let y: f64 = rng.gen_range(0.87..10.0);
        let t: f64 = rng.gen_range(-100.0..100.0);
        let row = fourier_row(y, c(0.5, t), 1e-10).unwrap();
        let envelope = y.sqrt() + ((t.abs() + 1.0) / y).sqrt();
        for _ in 0..100 {
            let x: f64 = rng.gen_range(-0.5..0.5);
            worst = worst.max(row.value_at(x).norm() / envelope);
        }
    }
    assert!(worst <= 10.0, "{worst}");
}

#[test]
fn tail_bound_controls_truncation() {
    // the reported tail bound dominates the change from a much longer series
    let s = c(0.5, 80.0);
    for y in [0.9, 2.0, 6.0] {
        let short = fourier_row(y, s, 1e-6).unwrap();
        let long = fourier_row(y, s, 1e-14).unwrap();
        for x in [0.0, 0.13, 0.37] {
            let diff = (short.value_at(x) - long.value_at(x)).norm();
            assert!(diff <= short.tail_bound + long.tail_bound + 1e-12, "y={y} x={x}: {diff} > {}", short.tail_bound);
        }
    }
}

#[test]
fn truncation_length_is_monotone_and_bounded() {
    for t in [0.0, 10.0, 100.0, 400.0] {
        let mut prev = usize::MAX;
        for k in 0..20 {
            let y = 0.87 * 1.3f64.powi(k);
            let n = truncation_length(y, t, 1e-10);
            assert!(n <= prev, "t={t} y={y}");
            let cap = ((t + 9.0 * (t + 1.0).cbrt() + 40.0) / (2.0 * std::f64::consts::PI * y)).ceil() as usize;
            assert!(n <= cap.max(1), "t={t} y={y}: {n} > {cap}");
            prev = n;
        }
    }
}
