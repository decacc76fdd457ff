//! Epstein zeta functions of binary positive definite forms
//! Q(m, n) = a m^2 + 2 b m n + c n^2: direct lattice summation, the
//! smoothed approximate functional equation on the critical line, and
//! the associated exponential sums.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{checked_exp, ln_gamma_r};

/// Largest number of lattice points a direct sum may visit.
pub const MAX_LATTICE_POINTS: f64 = 4e8;

/// Largest box accepted by [`exp_sum`].
pub const MAX_EXP_SUM_POINTS: u64 = 100_000_000;

/// Gram matrix ((a, b), (b, c)) of a positive definite binary form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl GramMatrix {
    /// ((a, b), (b, 1)) with a >= 1 and |b| <= 1/2.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a >= 1.0 && b.abs() <= 0.5 && a.is_finite()) {
            return Err(Error::Domain(format!("Gram matrix ((a, b), (b, 1)) needs a >= 1, |b| <= 1/2; got a={a}, b={b}")));
        }
        Ok(GramMatrix { a, b, c: 1.0 })
    }

    /// Any positive definite ((a, b), (b, c)).
    pub fn general(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && c > 0.0 && a * c > b * b && a.is_finite() && c.is_finite()) {
            return Err(Error::Domain(format!("((a, b), (b, c)) = (({a}, {b}), ({b}, {c})) is not positive definite")));
        }
        Ok(GramMatrix { a, b, c })
    }

    /// Gram matrix of the integral form a x^2 + b x y + c y^2.
    pub fn from_form(f: &crate::quadforms::QuadraticForm) -> Result<Self> {
        GramMatrix::general(f.a as f64, f.b as f64 / 2.0, f.c as f64)
    }

    pub fn det(&self) -> f64 {
        self.a * self.c - self.b * self.b
    }

    pub fn eval(&self, m: f64, n: f64) -> f64 {
        self.a * m * m + 2.0 * self.b * m * n + self.c * n * n
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        GramMatrix::general(lambda * self.a, lambda * self.b, lambda * self.c)
    }

    /// ((a, -b), (-b, 1)): the inverse matrix up to the factor det and the
    /// swap of coordinates, i.e. E(Z^{-1}, s) = det^s E(reflected, s).
    pub fn reflected(&self) -> Self {
        GramMatrix { a: self.a, b: -self.b, c: self.c }
    }

    /// Point b/c + i sqrt(det)/c of the upper half-plane with |m z + n|^2 c = Q(n, m) ... for c = 1
    /// this is the z with Q(m, n) = |m z + n|^2.
    pub fn half_plane_point(&self) -> (f64, f64) {
        (self.b / self.c, self.det().sqrt() / self.c)
    }

    /// max of sqrt(Q) over the unit cell [-1/2, 1/2]^2.
    fn cell_radius(&self) -> f64 {
        ((self.a + self.c + 2.0 * self.b.abs()) / 4.0).sqrt()
    }
}

/// Calls `visit(q)` once for each pair +-v of nonzero lattice points with
/// Q(v) <= r_max (so the full sum is twice the visited sum).
fn for_each_half_lattice<F: FnMut(f64)>(g: &GramMatrix, r_max: f64, mut visit: F) {
    let det = g.det();
    // m = 0, n > 0
    let n_top = (r_max / g.c).sqrt().floor() as i64;
    for n in 1..=n_top {
        let q = g.c * (n * n) as f64;
        if q <= r_max {
            visit(q);
        }
    }
    let m_top = (r_max * g.c / det).sqrt().floor() as i64;
    for m in 1..=m_top {
        let mf = m as f64;
        let disc = g.c * r_max - det * mf * mf;
        if disc < 0.0 {
            continue;
        }
        let root = disc.sqrt();
        let lo = ((-g.b * mf - root) / g.c).ceil() as i64 - 1;
        let hi = ((-g.b * mf + root) / g.c).floor() as i64 + 1;
        let am2 = g.a * mf * mf;
        let two_bm = 2.0 * g.b * mf;
        for n in lo..=hi {
            let nf = n as f64;
            let q = am2 + two_bm * nf + g.c * nf * nf;
            if q <= r_max {
                visit(q);
            }
        }
    }
}

/// Neumaier compensated sum.
#[derive(Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Bound on |sum_{Q(v) > R} Q(v)^{-s} - (pi / sqrt det) R^{1-s} / (s - 1)|.
fn direct_tail_bound(g: &GramMatrix, s: Complex64, r: f64) -> f64 {
    let sigma = s.re;
    let delta = g.cell_radius();
    let rho = r.sqrt();
    let r0 = rho - 2.0 * delta;
    if r0 <= 0.0 {
        return f64::INFINITY;
    }
    let area = PI / g.det().sqrt();
    area * (4.0 * delta * (rho - delta).powf(1.0 - 2.0 * sigma)
        + 2.0 * s.norm() * delta * r0.powf(1.0 - 2.0 * sigma) / (sigma - 0.5)
        + 2.0 * s.norm() * delta * delta * r0.powf(-2.0 * sigma) / sigma)
}

/// sum over nonzero lattice points of Q(v)^{-s}, for Re s >= 1.25, to absolute accuracy `tol`.
///
/// Points with Q <= R are summed; the rest is replaced by the integral
/// (pi / sqrt det) R^{1-s}/(s-1), whose error is bounded by comparing each
/// point with its unit cell.
pub fn epstein_direct(z: &GramMatrix, s: Complex64, tol: f64) -> Result<Complex64> {
    if s.re < 1.25 {
        return Err(Error::Convergence(format!("direct lattice sum needs Re s >= 1.25, got {s}")));
    }
    let mut r = 16.0 * z.cell_radius().powi(2).max(1.0);
    while direct_tail_bound(z, s, r) > tol {
        r *= 1.5;
        if PI * r / z.det().sqrt() > MAX_LATTICE_POINTS {
            return Err(Error::Accuracy(format!("lattice sum for s = {s} cannot reach {tol:e} within the point budget")));
        }
    }
    // most of the terms are far below one ulp of the running sum, so plain
    // accumulation would drop them
    let real_s = s.im == 0.0;
    let int_s = real_s && s.re.fract() == 0.0 && s.re <= 16.0;
    let mut total = if int_s {
        let k = s.re as i32;
        let mut acc = Compensated::default();
        for_each_half_lattice(z, r, |q| acc.add(q.powi(-k)));
        Complex64::new(acc.value(), 0.0)
    } else if real_s {
        let mut acc = Compensated::default();
        for_each_half_lattice(z, r, |q| acc.add(q.powf(-s.re)));
        Complex64::new(acc.value(), 0.0)
    } else {
        let (mut re, mut im) = (Compensated::default(), Compensated::default());
        for_each_half_lattice(z, r, |q| {
            let w = (-s * q.ln()).exp();
            re.add(w.re);
            im.add(w.im);
        });
        Complex64::new(re.value(), im.value())
    };
    total *= 2.0;
    let ln_r = r.ln();
    total += (PI / z.det().sqrt()) * ((1.0 - s) * ln_r).exp() / (s - 1.0);
    Ok(total)
}

/// Sign of the weight: `Plus` pairs with Q, `Minus` with the dual form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Trapezoid nodes on the contour Re u = 1, |Im u| <= 8.
pub const CONTOUR_NODES: usize = 2001;
const CONTOUR_HALF_HEIGHT: f64 = 8.0;

/// Samples g(v) dv / (2 pi) of the integrand of W at u = 1 + i v, without y^{-u}.
fn contour_samples(sign: Sign, t: f64) -> Result<Vec<(f64, Complex64)>> {
    let st = sign.factor() * t;
    let base = ln_gamma_r(Complex64::new(1.0, 2.0 * st))?;
    let h = 2.0 * CONTOUR_HALF_HEIGHT / (CONTOUR_NODES - 1) as f64;
    let mut out = Vec::with_capacity(CONTOUR_NODES);
    for k in 0..CONTOUR_NODES {
        let v = -CONTOUR_HALF_HEIGHT + k as f64 * h;
        let u = Complex64::new(1.0, v);
        let log_ratio = ln_gamma_r(2.0 * (u + Complex64::new(0.5, st)))? - base;
        let weight = if k == 0 || k == CONTOUR_NODES - 1 { 0.5 } else { 1.0 };
        let g = checked_exp(log_ratio + u * u, "AFE weight integrand")? / u * (weight * h / (2.0 * PI));
        out.push((v, g));
    }
    Ok(out)
}

fn sum_samples(samples: &[(f64, Complex64)], ln_y: f64) -> Complex64 {
    // y^{-u} = y^{-1} e^{-i v ln y}, rotated along the uniform grid
    let (v0, _) = samples[0];
    let h = if samples.len() > 1 { samples[1].0 - v0 } else { 0.0 };
    let step = Complex64::from_polar(1.0, -h * ln_y);
    let mut rot = Complex64::from_polar(1.0, -v0 * ln_y);
    let mut total = Complex64::new(0.0, 0.0);
    for (k, (v, g)) in samples.iter().enumerate() {
        if k % 128 == 127 {
            rot = Complex64::from_polar(1.0, -v * ln_y);
        }
        total += g * rot;
        rot *= step;
    }
    total * (-ln_y).exp()
}

/// W^{+-}_t(y) = (1/2 pi i) int_{(1)} Gamma_R(2(u + 1/2 +- it)) / Gamma_R(1 +- 2it) e^{u^2} y^{-u} du/u.
///
/// The e^{1 - v^2} decay on Re u = 1 makes the cut at |v| = 8 negligible
/// (< 1e-25 relative) and the trapezoid rule converges geometrically, so
/// `tol` only needs to be above ~1e-14.
pub fn weight_w(sign: Sign, t: f64, y: f64, tol: f64) -> Result<Complex64> {
    if t.abs() > 500.0 {
        return Err(Error::Range(format!("|t| = {} exceeds 500", t.abs())));
    }
    if !(y > 0.0) {
        return Err(Error::Domain(format!("W needs y > 0, got {y}")));
    }
    if tol < 1e-14 {
        return Err(Error::Accuracy(format!("tolerance {tol:e} is below the quadrature floor")));
    }
    Ok(sum_samples(&contour_samples(sign, t)?, y.ln()))
}

/// W tabulated on a uniform grid in log y and interpolated (8-point Lagrange).
struct WeightTable {
    lo: f64,
    step: f64,
    values: Vec<Complex64>,
}

impl WeightTable {
    const STEP: f64 = 1.0 / 64.0;

    fn new(sign: Sign, t: f64, ln_lo: f64, ln_hi: f64) -> Result<Self> {
        let samples = contour_samples(sign, t)?;
        let lo = ln_lo - 8.0 * Self::STEP;
        let n = ((ln_hi - lo) / Self::STEP).ceil() as usize + 9;
        let values = (0..n).map(|k| sum_samples(&samples, lo + k as f64 * Self::STEP)).collect();
        Ok(WeightTable { lo, step: Self::STEP, values })
    }

    fn eval(&self, ln_y: f64) -> Complex64 {
        let pos = (ln_y - self.lo) / self.step;
        let base = (pos.floor() as isize - 3).clamp(0, self.values.len() as isize - 8) as usize;
        let x = pos - base as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for j in 0..8 {
            let mut w = 1.0;
            for k in 0..8 {
                if k != j {
                    w *= (x - k as f64) / (j as f64 - k as f64);
                }
            }
            total += self.values[base + j] * w;
        }
        total
    }

    /// Smallest tabulated ln y beyond which sum of sqrt(y)|W(y)| d(ln y) stays below `budget`.
    fn cutoff(&self, budget: f64) -> f64 {
        let mut acc = 0.0;
        for k in (0..self.values.len()).rev() {
            let ln_y = self.lo + k as f64 * self.step;
            acc += (0.5 * ln_y).exp() * self.values[k].norm() * self.step;
            if acc > budget {
                return ln_y + self.step;
            }
        }
        self.lo
    }
}

/// Pieces of the approximate functional equation at s = 1/2 + it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfeTerms {
    /// sum Q(v)^{-s} W^+(Q(v) / X), X = sqrt(a)
    pub plus_sum: Complex64,
    /// sum Q*(v)^{s-1} W^-(Q*(v) X) over the dual form Q*
    pub minus_sum: Complex64,
    /// Gamma_R(2(1-s)) / (Gamma_R(2s) sqrt det), the weight of `minus_sum`
    pub gamma_ratio: Complex64,
    /// contributions of the poles at s = 1 and s = 0
    pub pole_terms: Complex64,
    pub total: Complex64,
}

impl AfeTerms {
    pub fn recompose(&self) -> Complex64 {
        self.plus_sum + self.gamma_ratio * self.minus_sum + self.pole_terms
    }
}

/// Epstein zeta function at s = 1/2 + it by the approximate functional
/// equation with smoothing e^{u^2}; the pole contributions at s = 1 and s = 0
/// are included exactly.
pub fn epstein_afe(z: &GramMatrix, t: f64, tol: f64) -> Result<AfeTerms> {
    if t.abs() < 0.5 || t.abs() > 500.0 {
        return Err(Error::Range(format!("AFE needs 0.5 <= |t| <= 500, got {t}")));
    }
    let s = Complex64::new(0.5, t);
    let det = z.det();
    let x = z.a.sqrt();
    let ln_x = x.ln();
    // dual form Q*(v) = Q_{Z^{-1}}(v) = Q_reflected(swap v) / det
    let dual = GramMatrix { a: z.c / det, b: -z.b / det, c: z.a / det };

    let sum_with = |g: &GramMatrix, sign: Sign, ln_shift: f64, exponent: Complex64| -> Result<Complex64> {
        // argument of W is Q e^{ln_shift}
        let q_min = g.det() / g.a.max(g.c);
        let ln_lo = q_min.ln() + ln_shift - 1.0;
        let ln_hi = (t.abs() / PI).max(1.0).ln() + 12.0;
        let table = WeightTable::new(sign, t, ln_lo, ln_hi)?;
        // lattice tail of sum |Q^{-1/2}| |W| ~ (pi/sqrt det) int r^{-1/2} |W(r e^shift)| dr
        let mass = PI / g.det().sqrt() * (-0.5 * ln_shift).exp();
        let ln_cut = table.cutoff(tol / (8.0 * mass.max(1e-300)));
        if ln_cut >= ln_hi - 0.5 {
            return Err(Error::Accuracy(format!("AFE weight does not decay to {tol:e} inside the table")));
        }
        let r_max = (ln_cut - ln_shift).exp();
        if PI * r_max / g.det().sqrt() > MAX_LATTICE_POINTS {
            return Err(Error::Resource(format!("AFE sum needs more than {MAX_LATTICE_POINTS:e} points")));
        }
        let mut total = Complex64::new(0.0, 0.0);
        for_each_half_lattice(g, r_max, |q| {
            let ln_q = q.ln();
            total += (exponent * ln_q).exp() * table.eval(ln_q + ln_shift);
        });
        Ok(total * 2.0)
    };

    let plus_sum = sum_with(z, Sign::Plus, -ln_x, -s)?;
    let minus_sum = sum_with(&dual, Sign::Minus, ln_x, s - 1.0)?;
    let ln_gamma_s = ln_gamma_r(2.0 * s)?;
    let gamma_ratio = (ln_gamma_r(2.0 * (1.0 - s))? - ln_gamma_s).exp() / det.sqrt();
    // -[G(1-s) X^{1-s} / ((1-s) sqrt det) + G(-s) X^{-s} / s] / Gamma_R(2s), G(u) = e^{u^2}
    let one_minus = 1.0 - s;
    let p1 = (one_minus * one_minus + one_minus * ln_x - ln_gamma_s).exp() / (one_minus * det.sqrt());
    let p0 = (s * s - s * ln_x - ln_gamma_s).exp() / s;
    let pole_terms = -(p1 + p0);
    let total = plus_sum + gamma_ratio * minus_sum + pole_terms;
    Ok(AfeTerms { plus_sum, minus_sum, gamma_ratio, pole_terms, total })
}

/// sum over integer points of [x1_lo, x1_hi] x [x2_lo, x2_hi] of e^{it log P(x)}, where
/// P = Q for `Plus` and P = det Q_{Z^{-1}} = x1^2 - 2 b x1 x2 + a x2^2 (for c = 1) for `Minus`.
pub fn exp_sum(z: &GramMatrix, t: f64, x1: (f64, f64), x2: (f64, f64), sign: Sign) -> Result<Complex64> {
    let valid = |(lo, hi): (f64, f64)| lo > 0.0 && lo <= hi && hi <= 2.0 * lo;
    if !valid(x1) || !valid(x2) {
        return Err(Error::Domain(format!("boxes need 0 < X <= X' <= 2X, got {x1:?} x {x2:?}")));
    }
    let (m_lo, m_hi) = (x1.0.ceil() as i64, x1.1.floor() as i64);
    let (n_lo, n_hi) = (x2.0.ceil() as i64, x2.1.floor() as i64);
    if m_hi < m_lo || n_hi < n_lo {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let count = (m_hi - m_lo + 1) as u64 * (n_hi - n_lo + 1) as u64;
    if count > MAX_EXP_SUM_POINTS {
        return Err(Error::Resource(format!("box has {count} points, cap is {MAX_EXP_SUM_POINTS}")));
    }
    let form = match sign {
        Sign::Plus => *z,
        Sign::Minus => GramMatrix { a: z.c, b: -z.b, c: z.a },
    };
    let mut total = Complex64::new(0.0, 0.0);
    for m in m_lo..=m_hi {
        let mf = m as f64;
        let mut row = Complex64::new(0.0, 0.0);
        for n in n_lo..=n_hi {
            let q = form.eval(mf, n as f64);
            let (sin, cos) = (t * q.ln()).sin_cos();
            row += Complex64::new(cos, sin);
        }
        total += row;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn direct_identity_lattice() {
        let id = GramMatrix::new(1.0, 0.0).unwrap();
        let beta2 = 0.915_965_594_177_219_1;
        let zeta2 = PI * PI / 6.0;
        let v = epstein_direct(&id, c(2.0, 0.0), 1e-10).unwrap();
        assert!((v.re - 4.0 * zeta2 * beta2).abs() < 1e-9, "{v}");
        // 4 zeta(3) beta(3), beta(3) = pi^3/32
        let v3 = epstein_direct(&id, c(3.0, 0.0), 1e-10).unwrap();
        let want = 4.0 * 1.202_056_903_159_594_3 * PI.powi(3) / 32.0;
        assert!((v3.re - want).abs() < 1e-9, "{v3} vs {want}");
        assert!(epstein_direct(&id, c(1.2, 0.0), 1e-6).is_err());
    }

    #[test]
    fn w_limits() {
        let w = weight_w(Sign::Plus, 5.0, 1e-6, 1e-12).unwrap();
        assert!((w - 1.0).norm() <= 0.01);
        let wp = weight_w(Sign::Plus, 7.0, 3.0, 1e-12).unwrap();
        let wm = weight_w(Sign::Minus, 7.0, 3.0, 1e-12).unwrap();
        assert!((wp - wm.conj()).norm() < 1e-14);
    }

    #[test]
    fn exp_sum_trivial() {
        let id = GramMatrix::new(1.0, 0.0).unwrap();
        let v = exp_sum(&id, 0.0, (3.0, 6.0), (5.0, 10.0), Sign::Plus).unwrap();
        assert_eq!(v, c(24.0, 0.0));
        let one = exp_sum(&id, 17.0, (3.0, 3.5), (5.0, 5.5), Sign::Plus).unwrap();
        assert!((one.norm() - 1.0).abs() < 1e-15);
    }
}
