//! The non-holomorphic Eisenstein series E(z, s) for SL(2, Z), evaluated
//! through its Fourier expansion
//!
//! E(z, s) = y^s + phi(s) y^{1-s}
//!         + 4 pi^s sqrt(y) / (Gamma(s) zeta(2s)) sum_{n >= 1} tau_{s-1/2}(n) K_{s-1/2}(2 pi n y) cos(2 pi n x).
//!
//! With this normalization the lattice-sum identity reads
//! [`BRIDGE_FACTOR`] zeta(2s) E(z, s) = y^s sum' |m z + n|^{-2s}, the factor 2
//! coming from the pairs +-(m, n) that define the same coset.
//!
//! On vertical lines the Bessel factors are carried in the rescaled form
//! e^{pi |t|/2} K and the compensating e^{-pi |t|/2} is folded into 1/Gamma(s),
//! so nothing underflows for large |t|.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modgroup::{reduce_to_fundamental, HalfPlanePoint};
use crate::numerics::{bessel_k_scaled_complex, checked_exp, divisor_tau, ln_gamma, ln_gamma_r, zeta};

/// zeta(2s) E(z, s) times this factor equals y^s times the Epstein zeta
/// function of the lattice Z + z Z.
pub const BRIDGE_FACTOR: f64 = 2.0;

/// Smallest admissible height after reduction.
pub const MIN_REDUCED_HEIGHT: f64 = 0.866_025_403_784_438_6 - 1e-6;

/// Radius around s = 1 inside which evaluation is refused.
pub const POLE_EXCLUSION: f64 = 0.05;

/// Additive slack in the bound on the truncation length (see [`truncation_length`]).
pub const TRUNCATION_SLACK_CONSTANT: f64 = 9.0;

/// Value of E(z, s) with the bound on the neglected Fourier tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EisensteinValue {
    /// Reduced representative at which the series was summed.
    pub z: HalfPlanePoint,
    pub s: Complex64,
    pub value: Complex64,
    pub tail_bound: f64,
}

/// phi(s) = Gamma_R(2s-1) zeta(2s-1) / (Gamma_R(2s) zeta(2s)).
pub fn scattering_phi(s: Complex64) -> Result<Complex64> {
    let u = 2.0 * s - 1.0;
    if (s - 1.0).norm() == 0.0 {
        return Err(Error::Pole("phi has a pole at s = 1".into()));
    }
    if u.im == 0.0 && u.re <= 0.0 && (u.re / 2.0).fract() == 0.0 {
        return Err(Error::Pole(format!("phi is singular at s = {s}")));
    }
    let tol = 1e-15;
    let ratio = checked_exp(ln_gamma_r(u)? - ln_gamma_r(2.0 * s)?, "Gamma_R ratio")?;
    Ok(ratio * zeta(u, tol)? / zeta(2.0 * s, tol)?)
}

/// Fourier data of E(., s) on the horizontal line Im z = y: the constant
/// term and the coefficients c_n with E(x + iy, s) = constant + sum c_n cos(2 pi n x).
#[derive(Debug, Clone)]
pub struct FourierRow {
    pub y: f64,
    pub s: Complex64,
    pub constant: Complex64,
    pub coefficients: Vec<Complex64>,
    pub tail_bound: f64,
}

impl FourierRow {
    pub fn value_at(&self, x: f64) -> Complex64 {
        let mut total = self.constant;
        let step = Complex64::from_polar(1.0, 2.0 * PI * x);
        let mut rot = step;
        for (k, c) in self.coefficients.iter().enumerate() {
            // resynchronise the rotation every 64 terms to bound drift
            if k % 64 == 63 {
                rot = Complex64::from_polar(1.0, 2.0 * PI * x * (k + 1) as f64);
            }
            total += c * rot.re;
            rot *= step;
        }
        total
    }
}

fn check_s(s: Complex64) -> Result<()> {
    if !(0.4..=5.0).contains(&s.re) || s.im.abs() > 500.0 {
        return Err(Error::Range(format!("s = {s} outside 0.4 <= Re s <= 5, |Im s| <= 500")));
    }
    if (s - 1.0).norm() < POLE_EXCLUSION {
        return Err(Error::Pole(format!("s = {s} is within {POLE_EXCLUSION} of the pole at 1")));
    }
    Ok(())
}

/// |4 pi^s sqrt(y) / (Gamma(s) zeta(2s))| e^{-pi |t| / 2} and its complex value.
fn expansion_prefactor(y: f64, s: Complex64) -> Result<Complex64> {
    let log = (4.0 * y.sqrt()).ln() + s * PI.ln() - ln_gamma(s)? - PI * s.im.abs() / 2.0;
    Ok(checked_exp(log, "Fourier prefactor")? / zeta(2.0 * s, 1e-15)?)
}

/// Upper bound for e^{pi |a|/2} |K_{mu + i a}(x)|.
fn bessel_bound(mu: f64, a: f64, x: f64) -> f64 {
    let a = a.abs();
    let mu = mu.abs();
    if x <= a {
        return f64::INFINITY;
    }
    // shift the contour by theta with sin(theta) = a/x
    let big_x = (x * x - a * a).sqrt();
    let theta = (a / x).asin();
    let log = a * (PI / 2.0 - theta) - big_x + mu * mu / (2.0 * big_x) + (PI / (2.0 * big_x)).ln() * 0.5;
    log.exp()
}

/// Bound on sum_{n > n0} |c_n| for the row at height y.
fn tail_bound_after(n0: usize, y: f64, s: Complex64, prefactor_abs: f64) -> f64 {
    let mu = s.re - 0.5;
    let a = s.im;
    let term = |n: usize| {
        let nf = n as f64;
        // |tau_v(n)| <= d(n) n^{|Re v|} <= 2 sqrt(n) n^{|Re v|}
        prefactor_abs * 2.0 * nf.sqrt() * nf.powf(mu.abs()) * bessel_bound(mu, a, 2.0 * PI * nf * y)
    };
    let mut total = 0.0;
    let mut n = n0 + 1;
    let mut prev = term(n);
    loop {
        total += prev;
        n += 1;
        let next = term(n);
        // once the terms fall geometrically with ratio <= 1/2 (and the ratio
        // keeps falling since the exponent is convex in n), the rest is <= next
        if next <= 0.5 * prev && next < 1e-300_f64.max(total * 1e-17) {
            return total + next;
        }
        if next <= 0.5 * prev && next < total * 1e-3 {
            return total + 2.0 * next;
        }
        prev = next;
        if n > n0 + 1_000_000 {
            return f64::INFINITY;
        }
    }
}

fn truncation_for(y: f64, s: Complex64, tol: f64, prefactor_abs: f64) -> usize {
    let a = s.im.abs();
    let mut n = ((a / (2.0 * PI * y)).floor() as usize).max(1);
    while tail_bound_after(n, y, s, prefactor_abs) >= tol {
        n += 1;
    }
    n
}

/// Smallest N for which the bound on the Fourier tail beyond N on the line
/// Im z = y at s = 1/2 + it is below `tol`. It never exceeds
/// ceil((|t| + C (|t|+1)^{1/3} + 40) / (2 pi y)) with C = [`TRUNCATION_SLACK_CONSTANT`].
pub fn truncation_length(y: f64, t: f64, tol: f64) -> usize {
    let s = Complex64::new(0.5, t);
    let prefactor = expansion_prefactor(y, s).map(|p| p.norm()).unwrap_or(1.0);
    truncation_for(y, s, tol, prefactor)
}

/// Fourier data of E(., s) at height y (no reduction is applied).
pub fn fourier_row(y: f64, s: Complex64, tol: f64) -> Result<FourierRow> {
    check_s(s)?;
    if !(y >= MIN_REDUCED_HEIGHT) {
        return Err(Error::Range(format!("height {y} below the fundamental domain")));
    }
    let prefactor = expansion_prefactor(y, s)?;
    let n_max = truncation_for(y, s, tol / 2.0, prefactor.norm());
    let tail_bound = tail_bound_after(n_max, y, s, prefactor.norm());
    let ln_y = y.ln();
    let constant = (s * ln_y).exp() + scattering_phi(s)? * ((1.0 - s) * ln_y).exp();
    let v = s - 0.5;
    let mu_abs = v.re.abs();
    let mut coefficients = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let nf = n as f64;
        let weight = prefactor.norm() * 2.0 * nf.sqrt() * nf.powf(mu_abs);
        let btol = (tol / (4.0 * n_max as f64 * weight.max(1e-300))).clamp(1e-15, 1e-6);
        let k = bessel_k_scaled_complex(v, 2.0 * PI * nf * y, btol)?;
        coefficients.push(prefactor * divisor_tau(v, n as u64) * k);
    }
    Ok(FourierRow { y, s, constant, coefficients, tail_bound })
}

/// E(z, s); z is reduced to the fundamental domain first.
pub fn eisenstein(z: HalfPlanePoint, s: Complex64, tol: f64) -> Result<EisensteinValue> {
    check_s(s)?;
    let (w, _) = reduce_to_fundamental(z)?;
    let row = fourier_row(w.y, s, tol)?;
    Ok(EisensteinValue { z: w, s, value: row.value_at(w.x), tail_bound: row.tail_bound })
}
