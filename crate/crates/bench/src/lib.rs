//! Fixed workloads shared by the `kernels` benchmarks and their smoke test.

use hecke_core::epstein::{epstein_afe, exp_sum, GramMatrix, Sign};
use hecke_core::eisenstein::eisenstein;
use hecke_core::lfunctions::lk_hecke_all;
use hecke_core::numerics::bessel_k_scaled;
use hecke_core::quadforms::{class_group, Discriminant};
use hecke_core::{HalfPlanePoint, Result};
use num_complex::Complex64;

/// (t, y) pairs below, near and above the turning point y = t.
pub const BESSEL_CASES: [(f64, f64); 4] = [(5.0, 20.0), (50.0, 49.0), (200.0, 40.0), (500.0, 600.0)];

/// Spectral parameters for E(z, 1/2 + it) at z = 0.1 + 0.9i.
pub const EISENSTEIN_TS: [f64; 3] = [10.0, 100.0, 400.0];

/// t for the approximate functional equation of the form ((3, 0.2), (0.2, 1)).
pub const AFE_TS: [f64; 3] = [10.0, 50.0, 200.0];

/// Discriminants whose full set of character values is computed at s = 1/2 + 10i.
pub const HECKE_DISCS: [i64; 3] = [-23, -1003, 229];

pub fn bessel(t: f64, y: f64) -> Result<f64> {
    bessel_k_scaled(t, y)
}

pub fn eisenstein_on_line(t: f64) -> Result<Complex64> {
    Ok(eisenstein(HalfPlanePoint::new(0.1, 0.9)?, Complex64::new(0.5, t), 1e-10)?.value)
}

pub fn afe(t: f64) -> Result<Complex64> {
    Ok(epstein_afe(&GramMatrix::new(3.0, 0.2)?, t, 1e-8)?.total)
}

/// Exponential sum over the box [X, 2X]^2 with X = t^{1/2}.
pub fn exponential_sum(t: f64) -> Result<Complex64> {
    let x = t.sqrt();
    exp_sum(&GramMatrix::new(1.0, 0.0)?, t, (x, 2.0 * x), (x, 2.0 * x), Sign::Plus)
}

pub fn hecke_characters(d: i64) -> Result<Vec<Complex64>> {
    let g = class_group(Discriminant::fundamental(d)?)?;
    lk_hecke_all(&g, Complex64::new(0.5, 10.0), 1e-8)
}
