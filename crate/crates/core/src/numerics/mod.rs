//! Complex special functions: Gamma, Gamma_R, Riemann and Hurwitz zeta,
//! K-Bessel functions in rescaled form, and the divisor sums of the
//! Eisenstein Fourier expansion.

mod bessel;
mod gamma;
pub mod quad;
mod zeta;

use num_complex::Complex64;

pub use bessel::{bessel_k_scaled, bessel_k_scaled_complex, DEFAULT_BESSEL_TOL, MAX_ORDER};
pub use gamma::{gamma, gamma_r, ln_gamma, ln_gamma_r};
pub(crate) use gamma::checked_exp;
pub use zeta::{hurwitz_zeta, zeta};

/// Complex number carried by every analytic quantity.
pub type ComplexValue = Complex64;

/// Default tolerance for caller-facing evaluations.
pub const DEFAULT_TOL: f64 = 1e-10;

/// tau_v(n) = sum over factorisations n = a d of (a/d)^v.
pub fn divisor_tau(v: Complex64, n: u64) -> Complex64 {
    assert!(n >= 1, "divisor_tau needs n >= 1");
    let ln_n = (n as f64).ln();
    let mut total = Complex64::new(0.0, 0.0);
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            // (d / (n/d))^v = exp(v (2 ln d - ln n))
            let e = 2.0 * (d as f64).ln() - ln_n;
            total += (v * e).exp();
            let other = n / d;
            if other != d {
                total += (-v * e).exp();
            }
        }
        d += 1;
    }
    total
}
