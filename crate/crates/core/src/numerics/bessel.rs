//! Modified Bessel function K_nu(x) of complex order and positive argument,
//! returned in the rescaled form e^{pi |Im nu| / 2} K_nu(x).
//!
//! Starting from K_nu(x) = 1/2 [F(nu) + F(-nu)] with
//! F(nu) = int_0^inf exp(-x cosh u + nu u) du, the ray [0, inf) is deformed
//! into the complex strip onto the curve on which Im(-x cosh u + i a u) is
//! constant (a = |Im nu|). On that curve the dominant exponential has fixed
//! phase, so the e^{-pi a / 2} factor of K_{ia}(x) for x < a is produced
//! analytically instead of by cancellation.
//!
//! * a <= x: the saddle sits on the imaginary axis at u = i asin(a/x); the
//!   curve is u = w + i v(w), sin v(w) = a w / (x sinh w), w in [0, inf).
//! * a > x: the saddles are at +-acosh(a/x) + i pi/2 and the constant-phase
//!   curve runs from +inf (v -> 0) through w0 + i pi/2 to +inf + 2 pi i. The
//!   horizontal return along Im u = 2 pi reproduces F(nu) times e^{2 pi i nu},
//!   which gives F(nu) (1 - e^{2 pi i nu}) = (imaginary-axis piece) - (curve).
//!
//! The imaginary-axis pieces of F(nu) and F(-nu) cancel exactly in K_nu.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::quad::tanh_sinh;
use crate::error::{Error, Result};

/// Default absolute accuracy of the rescaled value.
pub const DEFAULT_BESSEL_TOL: f64 = 1e-12;

/// Largest imaginary order accepted by [`bessel_k_scaled`].
pub const MAX_ORDER: f64 = 500.0;

/// e^{pi t / 2} K_{it}(y) for 0 <= t <= 500 and 0 < y <= 10 (t + 50).
pub fn bessel_k_scaled(t: f64, y: f64) -> Result<f64> {
    if !(t >= 0.0 && t <= MAX_ORDER) {
        return Err(Error::Range(format!("order t = {t} outside [0, {MAX_ORDER}]")));
    }
    if !(y > 0.0 && y <= 10.0 * (t + 50.0)) {
        return Err(Error::Range(format!("argument y = {y} outside (0, {}]", 10.0 * (t + 50.0))));
    }
    Ok(bessel_k_scaled_complex(Complex64::new(0.0, t), y, DEFAULT_BESSEL_TOL)?.re)
}

/// e^{pi |Im nu| / 2} K_nu(x) for complex order and x > 0.
///
/// `tol` is an absolute tolerance on the rescaled value relative to the
/// peak of the integrand (which is at most of order one).
pub fn bessel_k_scaled_complex(nu: Complex64, x: f64, tol: f64) -> Result<Complex64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Range(format!("argument x = {x} must be positive")));
    }
    let nu = if nu.im < 0.0 { -nu } else { nu };
    let (mu, a) = (nu.re, nu.im);
    let value = if a <= x {
        below_turning_point(mu, a, x, tol)?
    } else {
        above_turning_point(mu, a, x, tol)?
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Range(format!("K_{nu}({x}) not representable")));
    }
    Ok(value)
}

/// (sinh w - w cosh w), accurate for small w.
fn sinh_minus_w_cosh(w: f64) -> f64 {
    if w.abs() < 0.1 {
        let w2 = w * w;
        -w * w2 * (1.0 / 3.0 + w2 * (1.0 / 30.0 + w2 * (1.0 / 840.0 + w2 / 45_360.0)))
    } else {
        w.sinh() - w * w.cosh()
    }
}

/// 1 - w / sinh w, accurate for small w.
fn one_minus_w_over_sinh(w: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else if w.abs() < 0.1 {
        let w2 = w * w;
        // (sinh w - w) / sinh w
        let num = w * w2 * (1.0 / 6.0 + w2 * (1.0 / 120.0 + w2 * (1.0 / 5040.0 + w2 / 362_880.0)));
        num / w.sinh()
    } else {
        1.0 - w / w.sinh()
    }
}

fn below_turning_point(mu: f64, a: f64, x: f64, tol: f64) -> Result<Complex64> {
    let ratio = a / x;
    // scaled log-magnitude along the curve; also returns v and v'
    let point = |w: f64| -> (f64, f64, f64) {
        if a == 0.0 {
            return (-x * w.cosh(), 0.0, 0.0);
        }
        let q = ratio * if w == 0.0 { 1.0 } else { w / w.sinh() };
        let one_minus_q = (1.0 - ratio) + ratio * one_minus_w_over_sinh(w);
        let cos_v = (2.0 * one_minus_q - one_minus_q * one_minus_q).max(0.0).sqrt();
        let v = if q < 0.7 { q.asin() } else { FRAC_PI_2 - cos_v.asin() };
        let dv = if w == 0.0 {
            if ratio < 1.0 {
                0.0
            } else {
                -1.0 / 3f64.sqrt()
            }
        } else {
            let sh = w.sinh();
            let dq = ratio * sinh_minus_w_cosh(w) / (sh * sh);
            dq / cos_v
        };
        let r = -x * w.cosh() * cos_v - a * v + a * FRAC_PI_2;
        (r, v, dv)
    };
    let (r0, _, _) = point(0.0);
    // truncate once the integrand is negligible relative to its peak at w = 0
    let mut upper = 1.0;
    loop {
        let (r, _, _) = point(upper);
        if r + mu.abs() * upper < r0 - 60.0 || upper > 700.0 {
            break;
        }
        upper *= 1.5;
    }
    let scale = r0.exp().max(1e-300);
    let integrand = |w: f64| -> Complex64 {
        let (r, v, dv) = point(w);
        let mag = (r).exp();
        if mag == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let phase = Complex64::from_polar(1.0, mu * v);
        let body = Complex64::new((mu * w).cosh(), dv * (mu * w).sinh());
        phase * body * mag
    };
    tanh_sinh(integrand, 0.0, upper, tol * scale)
}

/// Constant-phase curve through the saddle w0 + i pi/2, written in terms of
/// the offset d = w - w0 so that it stays well conditioned near the saddle.
struct Curve {
    a: f64,
    x: f64,
    w0: f64,
    sinh_w0: f64,
    cosh_w0: f64,
}

impl Curve {
    /// Phase defect g(w0 + d) with eps = 1 - sin v, which vanishes on the curve.
    fn g(&self, d: f64, eps: f64) -> f64 {
        let sinh_d_minus_d = if d.abs() < 0.1 {
            let d2 = d * d;
            d * d2 * (1.0 / 6.0 + d2 * (1.0 / 120.0 + d2 * (1.0 / 5040.0 + d2 / 362_880.0)))
        } else {
            d.sinh() - d
        };
        -self.a * sinh_d_minus_d - self.x * self.sinh_w0 * cosh_minus_one(d)
            + self.x * (self.w0 + d).sinh() * eps
    }

    /// dg/dd = a - x cosh(w) sin v.
    fn dg(&self, d: f64, eps: f64) -> f64 {
        -self.x * (self.cosh_w0 * cosh_minus_one(d) + self.sinh_w0 * d.sinh()) + self.x * (self.w0 + d).cosh() * eps
    }

    /// Offset d at height v in (0, 2 pi).
    fn offset_at(&self, v: f64) -> Option<f64> {
        let eps = 2.0 * (0.5 * (FRAC_PI_2 - v)).sin().powi(2);
        if eps == 0.0 {
            return Some(0.0);
        }
        let (mut lo, mut hi) = if v < FRAC_PI_2 {
            let mut hi = (FRAC_PI_2 - v).max(1e-300);
            while self.g(hi, eps) > 0.0 {
                hi *= 2.0;
                if self.w0 + hi > 710.0 {
                    return None;
                }
            }
            (0.0, hi)
        } else if v < PI {
            (-self.w0, 0.0)
        } else {
            (-self.w0, (self.a * self.w0 - self.x * self.sinh_w0) / self.a - self.w0)
        };
        // g(lo) > 0 > g(hi) in the first case, g(lo) < 0 < g(hi) otherwise
        let falling = v < FRAC_PI_2;
        let mut d = 0.5 * (lo + hi);
        for _ in 0..200 {
            let gd = self.g(d, eps);
            if gd == 0.0 {
                return Some(d);
            }
            if (gd > 0.0) != falling {
                hi = d;
            } else {
                lo = d;
            }
            let mut next = d - gd / self.dg(d, eps);
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - d).abs() <= 4e-16 * d.abs() || hi - lo <= 4e-16 * d.abs() {
                return Some(next);
            }
            d = next;
        }
        Some(d)
    }
}

fn cosh_minus_one(d: f64) -> f64 {
    2.0 * (0.5 * d).sinh().powi(2)
}

fn above_turning_point(mu: f64, a: f64, x: f64, tol: f64) -> Result<Complex64> {
    let w0 = (a / x).acosh();
    let curve = Curve { a, x, w0, sinh_w0: w0.sinh(), cosh_w0: a / x };
    let e_ic = Complex64::from_polar(1.0, a * w0 - x * curve.sinh_w0);
    let integrand = |v: f64| -> Complex64 {
        let Some(d) = curve.offset_at(v) else {
            return Complex64::new(0.0, 0.0);
        };
        let w = w0 + d;
        let eps = 2.0 * (0.5 * (FRAC_PI_2 - v)).sin().powi(2);
        let cv = v.cos();
        let r = -x * w.cosh() * cv - a * v + a * FRAC_PI_2;
        if r < -745.0 {
            return Complex64::new(0.0, 0.0);
        }
        let den = curve.dg(d, eps);
        let dw = if d == 0.0 || den == 0.0 { -1.0 } else { x * w.sinh() * cv / den };
        let plus = Complex64::from_polar((mu * w).exp(), 0.0) * e_ic * Complex64::new(dw, 1.0);
        let minus = Complex64::from_polar((-mu * w).exp(), 0.0) * e_ic.conj() * Complex64::new(dw, -1.0);
        Complex64::from_polar(r.exp(), mu * v) * (plus + minus)
    };
    let mut total = tanh_sinh(&integrand, 0.0, FRAC_PI_2, tol)?;
    total += tanh_sinh(&integrand, FRAC_PI_2, PI, tol)?;
    let nu = Complex64::new(mu, a);
    let turn = (Complex64::i() * 2.0 * PI * nu).exp();
    let denom = 1.0 - turn;
    let mut value = -total * 0.5 / denom;
    // beyond v = pi the integrand is bounded by e^{x - a v + a pi / 2}
    if x - a * PI * 0.5 > -60.0 {
        let upper_piece = tanh_sinh(&integrand, PI, 2.0 * PI, tol)?;
        value -= upper_piece * 0.5 / denom;
        // the curve meets Im u = 2 pi at w = c/a; the rest of that line,
        // [c/a, inf) + 2 pi i, is a plain real-axis integral
        let start = (a * w0 - x * curve.sinh_w0) / a;
        let mut end = start + 1.0;
        while x * end.cosh() - mu.abs() * end - x * start.cosh() < 60.0 {
            end += 1.0;
        }
        let tail = tanh_sinh(
            |w: f64| Complex64::new(0.0, 0.0) + (nu * w).cosh() * (-x * (w.cosh() - start.cosh())).exp(),
            start,
            end,
            tol,
        )?;
        let scale = (a * FRAC_PI_2 - x * start.cosh()).exp();
        value -= turn * tail * scale / denom;
    }
    Ok(value)
}
