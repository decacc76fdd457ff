//! Complex Gamma function (Lanczos, g = 607/128, 15 terms) with reflection.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn is_nonpositive_integer(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

/// log sin(pi z), evaluated without overflow for large |Im z|. Branch is arbitrary.
pub(crate) fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 1.0 {
        return (z * PI).sin().ln();
    }
    if z.im > 0.0 {
        // sin(pi z) = e^{-i pi z} (e^{2 pi i z} - 1) / (2i)
        let e = (i * 2.0 * PI * z).exp();
        -i * PI * z + (e - 1.0).ln() - (2.0 * i).ln()
    } else {
        // sin(pi z) = e^{i pi z} (1 - e^{-2 pi i z}) / (2i)
        let e = (-i * 2.0 * PI * z).exp();
        i * PI * z + (-e + 1.0).ln() - (2.0 * i).ln()
    }
}

fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    // ln Gamma(z) for Re z >= 1/2
    let zm = z - 1.0;
    let mut sum = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += *c / (zm + k as f64);
    }
    let tt = zm + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (zm + 0.5) * tt.ln() - tt + sum.ln()
}

/// Complex log-Gamma. The imaginary part is only defined modulo 2*pi.
pub fn ln_gamma(s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Range(format!("non-finite argument {s}")));
    }
    if is_nonpositive_integer(s) {
        return Err(Error::Pole(format!("Gamma has a pole at {}", s.re)));
    }
    if s.re < 0.5 {
        // Gamma(s) Gamma(1-s) = pi / sin(pi s)
        Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(s) - ln_gamma_lanczos(1.0 - s))
    } else {
        Ok(ln_gamma_lanczos(s))
    }
}

pub(crate) fn checked_exp(w: Complex64, what: &str) -> Result<Complex64> {
    if w.re > 709.0 {
        return Err(Error::Range(format!("{what} overflows (log modulus {:.1})", w.re)));
    }
    if w.re < -708.0 {
        return Err(Error::Range(format!("{what} underflows (log modulus {:.1})", w.re)));
    }
    Ok(w.exp())
}

/// Complex Gamma function.
///
/// Values whose modulus leaves the f64 range (e.g. `|Im s|` beyond ~450 on the
/// critical line) are reported as `Range` errors; use [`ln_gamma`] there.
pub fn gamma(s: Complex64) -> Result<Complex64> {
    checked_exp(ln_gamma(s)?, "Gamma")
}

/// log Gamma_R(s) = -(s/2) log pi + log Gamma(s/2).
pub fn ln_gamma_r(s: Complex64) -> Result<Complex64> {
    Ok(-s * 0.5 * PI.ln() + ln_gamma(s * 0.5)?)
}

/// Gamma_R(s) = pi^{-s/2} Gamma(s/2).
pub fn gamma_r(s: Complex64) -> Result<Complex64> {
    checked_exp(ln_gamma_r(s)?, "Gamma_R")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_forms() {
        assert!((gamma(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((gamma(c(0.5, 0.0)).unwrap() - PI.sqrt()).norm() < 1e-14);
        assert!((gamma(c(5.0, 0.0)).unwrap() - 24.0).norm() < 1e-12);
        assert!((gamma(c(-0.5, 0.0)).unwrap() + 2.0 * PI.sqrt()).norm() < 1e-13);
    }

    #[test]
    fn critical_line_modulus() {
        for t in [1.0, 5.0, 20.0, 100.0] {
            let g = gamma(c(0.5, t)).unwrap();
            let expect = PI / (PI * t).cosh();
            let rel = (g.norm_sqr() - expect).abs() / expect;
            assert!(rel < 1e-12, "t={t} rel={rel}");
        }
    }

    #[test]
    fn large_imaginary_part_via_log() {
        // log|Gamma(1/2 + it)| = (1/2) log(pi / cosh(pi t))
        let t = 500.0;
        let lg = ln_gamma(c(0.5, t)).unwrap();
        let expect = 0.5 * (PI.ln() - (PI * t - 2f64.ln()));
        assert!((lg.re - expect).abs() < 1e-10);
        assert!(matches!(gamma(c(0.5, t)), Err(Error::Range(_))));
    }

    #[test]
    fn poles() {
        assert!(matches!(gamma(c(0.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(gamma(c(-3.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(gamma_r(c(-2.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn gamma_r_values() {
        assert!((gamma_r(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((gamma_r(c(2.0, 0.0)).unwrap() - 1.0 / PI).norm() < 1e-14);
        assert!((gamma_r(c(4.0, 0.0)).unwrap() - 1.0 / (PI * PI)).norm() < 1e-14);
    }
}
