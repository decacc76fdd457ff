//! Quadrature rules: double-exponential (tanh-sinh) and composite Gauss–Legendre.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

const TANH_SINH_MAX_LEVEL: u32 = 12;
const TANH_SINH_T_MAX: f64 = 6.0;

/// Tanh-sinh quadrature of a complex integrand on [a, b].
///
/// Refines the step by halving until two successive levels agree to
/// `abs_tol`; the integrand may be singular (integrably) at the endpoints.
pub fn tanh_sinh<F>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    let half = 0.5 * (b - a);
    let mut eval = |t: f64| -> Complex64 {
        let sh = FRAC_PI_2 * t.sinh();
        let ch = sh.cosh();
        let w = FRAC_PI_2 * t.cosh() / (ch * ch);
        // distance to the nearer endpoint, computed without cancellation
        let d = half / (sh.abs().exp() * ch);
        let x = if t < 0.0 { a + d } else { b - d };
        if w == 0.0 || x <= a || x >= b {
            return Complex64::new(0.0, 0.0);
        }
        let v = f(x);
        if v.re.is_finite() && v.im.is_finite() {
            v * w
        } else {
            Complex64::new(0.0, 0.0)
        }
    };

    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= TANH_SINH_T_MAX {
        let t = k as f64 * h;
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut estimate = sum * h * half;
    // a single small difference can be accidental when the coarse grid
    // straddles a narrow peak, so two in a row are required
    let mut previous_diff = f64::INFINITY;
    for _level in 1..=TANH_SINH_MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= TANH_SINH_T_MAX {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            k += 2;
        }
        let next = sum * h * half;
        let diff = (next - estimate).norm();
        estimate = next;
        // the guard is relative to the size of the integral, since abs_tol may
        // be far below one
        let guard = (abs_tol * estimate.norm().max(abs_tol)).sqrt().max(1e3 * abs_tol);
        if diff <= abs_tol && previous_diff <= guard {
            return Ok(estimate);
        }
        previous_diff = diff;
    }
    Err(Error::Accuracy(format!(
        "tanh-sinh on [{a}, {b}] did not reach {abs_tol:e}"
    )))
}

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=n {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 0 { 1.0 } else { p1 };
                let pn1 = if n == 1 { 1.0 } else { p0 };
                dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integral over [a, b] with `panels` equal panels.
    pub fn composite<F>(&self, f: &mut F, a: f64, b: f64, panels: usize) -> Complex64
    where
        F: FnMut(f64) -> Complex64,
    {
        let width = (b - a) / panels as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let lo = a + p as f64 * width;
            let c = lo + 0.5 * width;
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                acc += f(c + 0.5 * width * x) * *w;
            }
            total += acc * (0.5 * width);
        }
        total
    }

    /// Doubles the panel count until successive results agree to `abs_tol`.
    pub fn adaptive<F>(&self, mut f: F, a: f64, b: f64, abs_tol: f64, max_panels: usize) -> Result<Complex64>
    where
        F: FnMut(f64) -> Complex64,
    {
        let mut panels = 4;
        let mut prev = self.composite(&mut f, a, b, panels);
        while panels < max_panels {
            panels *= 2;
            let next = self.composite(&mut f, a, b, panels);
            if (next - prev).norm() <= abs_tol {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::Accuracy(format!(
            "Gauss-Legendre on [{a}, {b}] did not reach {abs_tol:e} with {max_panels} panels"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // int_0^1 x^{-1/2} dx = 2
        let v = tanh_sinh(|x| Complex64::new(x.powf(-0.5), 0.0), 0.0, 1.0, 1e-12).unwrap();
        assert!((v.re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn tanh_sinh_smooth() {
        let v = tanh_sinh(|x| Complex64::new(x.cos(), x.sin()), 0.0, 2.0, 1e-14).unwrap();
        let exact = Complex64::new(2f64.sin(), 1.0 - 2f64.cos());
        assert!((v - exact).norm() < 1e-13);
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let gl = GaussLegendre::new(10);
        let v = gl.composite(&mut |x: f64| Complex64::new(x.powi(19), 0.0), 0.0, 1.0, 1);
        assert!((v.re - 0.05).abs() < 1e-15);
        let w: f64 = gl.weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }
}
