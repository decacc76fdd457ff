use hecke_bench::{
    afe, bessel, eisenstein_on_line, exponential_sum, hecke_characters, AFE_TS, BESSEL_CASES, EISENSTEIN_TS,
    HECKE_DISCS,
};

#[test]
fn every_workload_evaluates() {
    for (t, y) in BESSEL_CASES {
        assert!(bessel(t, y).unwrap().is_finite());
    }
    for t in EISENSTEIN_TS {
        assert!(eisenstein_on_line(t).unwrap().norm().is_finite());
    }
    for t in AFE_TS {
        assert!(afe(t).unwrap().norm() > 0.0);
    }
    let s = exponential_sum(1e3).unwrap();
    // at most the number of lattice points in the box
    assert!(s.norm() <= 1e3);
    for d in HECKE_DISCS {
        let values = hecke_characters(d).unwrap();
        assert!(!values.is_empty() && values.iter().all(|v| v.norm().is_finite()));
    }
}
