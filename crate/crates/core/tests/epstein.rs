use hecke_core::eisenstein::{eisenstein, BRIDGE_FACTOR};
use hecke_core::epstein::{epstein_afe, epstein_direct, exp_sum, weight_w, GramMatrix, Sign};
use hecke_core::numerics::zeta;
use hecke_core::numerics::ln_gamma_r;
use hecke_core::{Error, HalfPlanePoint};
use proptest::prelude::*;
use num_complex::Complex64;

fn bridge(g: &GramMatrix, s: Complex64) -> Complex64 {
    let (x, y) = g.half_plane_point();
    let e = eisenstein(HalfPlanePoint::new(x, y).unwrap(), s, 1e-12).unwrap().value;
    BRIDGE_FACTOR * zeta(2.0 * s, 1e-14).unwrap() * e / (s * y.ln()).exp()
}

#[test]
fn afe_matches_fourier_path() {
    for &(a, b, t) in &[(1.0, 0.0, 5.0), (1.3, 0.2, 10.0), (2.5, -0.4, 3.0), (7.0, 0.5, 20.0), (1.0, 0.5, 0.7)] {
        let g = GramMatrix::new(a, b).unwrap();
        let s = Complex64::new(0.5, t);
        let afe = epstein_afe(&g, t, 1e-10).unwrap();
        let want = bridge(&g, s);
        let err = (afe.total - want).norm() / want.norm().max(1.0);
        println!("a={a} b={b} t={t} afe={} bridge={want} err={err:e}", afe.total);
        assert!(err < 1e-8);
        assert!((afe.recompose() - afe.total).norm() < 1e-14 * afe.total.norm().max(1.0));
    }
}

#[test]
fn afe_functional_equation_self_consistency() {
    for &(a, b, t) in &[(1.0, 0.0, 5.0), (3.7, 0.31, 12.0), (15.0, -0.5, 40.0)] {
        let g = GramMatrix::new(a, b).unwrap();
        let s = Complex64::new(0.5, t);
        let lhs = epstein_afe(&g, t, 1e-10).unwrap().total;
        let dual = epstein_afe(&g.reflected(), -t, 1e-10).unwrap().total;
        let ratio = (ln_gamma_r(2.0 * (1.0 - s)).unwrap() - ln_gamma_r(2.0 * s).unwrap()).exp();
        let rhs = ratio * ((0.5 - s) * g.det().ln()).exp() * dual;
        assert!((lhs - rhs).norm() <= 1e-8 * lhs.norm().max(1.0), "{lhs} vs {rhs}");
    }
}

#[test]
fn afe_rejects_small_t() {
    let id = GramMatrix::new(1.0, 0.0).unwrap();
    assert!(matches!(epstein_afe(&id, 0.2, 1e-8), Err(Error::Range(_))));
    assert!(matches!(epstein_afe(&id, 0.0, 1e-8), Err(Error::Range(_))));
}

#[test]
fn direct_sum_symmetries() {
    for &(a, b) in &[(1.0, 0.3), (2.2, -0.45), (9.0, 0.5)] {
        let g = GramMatrix::new(a, b).unwrap();
        for (s, tol) in [(Complex64::new(2.0, 0.0), 1e-8), (Complex64::new(2.0, 1.5), 1e-8), (Complex64::new(1.5, -1.0), 1e-4)] {
            let v = epstein_direct(&g, s, tol).unwrap();
            let w = epstein_direct(&g.reflected(), s, tol).unwrap();
            assert!((v - w).norm() < 1e-12 * v.norm());
            let c = epstein_direct(&g, s.conj(), tol).unwrap();
            assert!((v - c.conj()).norm() < 1e-12 * v.norm());
        }
    }
}

#[test]
fn direct_sum_homogeneity() {
    let g = GramMatrix::new(1.3, 0.4).unwrap();
    for s in [Complex64::new(2.0, 0.0), Complex64::new(2.0, 1.0)] {
        let v = epstein_direct(&g, s, 2e-10).unwrap();
        for lambda in [2.0f64, 5.0] {
            let want = (-s * lambda.ln()).exp() * v;
            let scaled = epstein_direct(&g.scaled(lambda).unwrap(), s, 5e-11 * want.norm()).unwrap();
            assert!((scaled - want).norm() <= 1e-9 * want.norm(), "{scaled} vs {want}");
        }
    }
}

#[test]
fn direct_sum_matches_fourier_path_off_line() {
    let g = GramMatrix::new(1.7, -0.2).unwrap();
    for t in [0.0, 4.0, 9.5] {
        let s = Complex64::new(2.0, t);
        let v = epstein_direct(&g, s, 1e-10).unwrap();
        let w = bridge(&g, s);
        assert!((v - w).norm() <= 1e-9 * w.norm(), "t={t}: {v} vs {w}");
    }
}

#[test]
fn weight_decays_past_conductor() {
    for t in [5.0f64, 30.0, -80.0] {
        for k in 0..=20 {
            let y = t.abs() * 100f64.powf(k as f64 / 20.0);
            let w = weight_w(Sign::Plus, t, y, 1e-12).unwrap();
            assert!(w.norm() <= 10.0 * (t.abs() / y).powi(2), "t={t} y={y} |W|={}", w.norm());
        }
    }
    assert!(matches!(weight_w(Sign::Plus, 600.0, 1.0, 1e-10), Err(Error::Range(_))));
}

#[test]
fn exp_sum_basic_properties() {
    let g = GramMatrix::new(4.0, 0.5).unwrap();
    let count = exp_sum(&g, 0.0, (10.0, 20.0), (7.5, 15.0), Sign::Minus).unwrap();
    assert_eq!(count, Complex64::new((11 * 8) as f64, 0.0));
    for t in [10.0, 1e3, 1e5] {
        for sign in [Sign::Plus, Sign::Minus] {
            let v = exp_sum(&g, t, (10.0, 20.0), (7.5, 15.0), sign).unwrap();
            assert!(v.norm() <= 88.0 + 1e-9);
        }
    }
    assert!(matches!(
        exp_sum(&g, 1.0, (1.0, 2.0), (3.0, 7.0), Sign::Plus),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        exp_sum(&g, 1.0, (2e4, 4e4), (2e4, 4e4), Sign::Plus),
        Err(Error::Resource(_))
    ));
}

#[test]
fn exp_sum_sign_minus_uses_scaled_dual_form() {
    let g = GramMatrix::new(2.0, 0.25).unwrap();
    let t = 37.0;
    let v = exp_sum(&g, t, (3.0, 5.0), (4.0, 6.0), Sign::Minus).unwrap();
    let mut want = Complex64::new(0.0, 0.0);
    for x1 in 3..=5 {
        for x2 in 4..=6 {
            let (x1, x2) = (x1 as f64, x2 as f64);
            let q = x1 * x1 - 2.0 * 0.25 * x1 * x2 + 2.0 * x2 * x2;
            want += Complex64::from_polar(1.0, t * q.ln());
        }
    }
    assert!((v - want).norm() < 1e-12);
}

#[test]
fn exp_sum_admissible_box_ratio() {
    let id = GramMatrix::new(1.0, 0.0).unwrap();
    let t: f64 = 1e3;
    let x = t.sqrt();
    let s = exp_sum(&id, t, (x, 2.0 * x), (x, 2.0 * x), Sign::Plus).unwrap();
    let ratio = s.norm() / (id.eval(x, x).sqrt() * t.cbrt());
    assert!(ratio <= 50.0, "ratio {ratio}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn afe_recomposes_exactly(a in 1.0f64..20.0, b in -0.5f64..0.5, t in 1.0f64..30.0) {
        let g = GramMatrix::new(a, b).unwrap();
        let terms = epstein_afe(&g, t, 1e-8).unwrap();
        prop_assert!((terms.recompose() - terms.total).norm() <= 1e-13 * terms.total.norm().max(1.0));
    }
}
