use hecke_core::modgroup::invariant_height;
use hecke_core::quadforms::{
    class_group, compose, enumerate_reduced, fundamental_discriminants, heegner_point, kronecker_chi, reduce_definite,
    rho, Discriminant, QuadraticForm,
};
use num_integer::Integer;
use proptest::prelude::*;

fn group_axioms(dv: i64) {
    let g = class_group(Discriminant::fundamental(dv).unwrap()).unwrap();
    let t = &g.composition_table;
    let h = g.h;
    for i in 0..h {
        assert_eq!(t[0][i], i, "D={dv}: identity");
        assert!(t[i].contains(&0), "D={dv}: inverse of {i}");
        for j in 0..h {
            assert_eq!(t[i][j], t[j][i], "D={dv}: commutativity");
            for k in 0..h {
                assert_eq!(t[t[i][j]][k], t[i][t[j][k]], "D={dv}: associativity");
            }
        }
    }
    let order: usize = g.cyclic_decomposition.iter().map(|c| c.1).product();
    assert_eq!(order, h);
    // characters are homomorphisms and orthogonal
    for chi in &g.characters {
        for i in 0..h {
            for j in 0..h {
                assert!((chi[t[i][j]] - chi[i] * chi[j]).norm() < 1e-12);
            }
        }
    }
    for a in 0..h {
        for b in 0..h {
            let s: num_complex::Complex64 = g.characters.iter().map(|chi| chi[a] * chi[b].conj()).sum();
            let want = if a == b { h as f64 } else { 0.0 };
            assert!((s - want).norm() < 1e-12, "D={dv}: orthogonality {a},{b}");
        }
    }
}

#[test]
fn class_groups_are_abelian_groups_with_orthogonal_characters() {
    for d in fundamental_discriminants(-2000, -3) {
        group_axioms(d.value());
    }
    for d in fundamental_discriminants(5, 2000) {
        group_axioms(d.value());
    }
}

#[test]
fn class_numbers_match_known_values() {
    let known = [(-3, 1), (-4, 1), (-23, 3), (-47, 5), (-71, 7), (-84, 4), (-163, 1), (-199, 9), (-420, 8), (-1999, 27)];
    for (d, h) in known {
        assert_eq!(class_group(Discriminant::fundamental(d).unwrap()).unwrap().h, h, "D={d}");
    }
    // wide class numbers of real fields, cross-checked with h log(eps) = sqrt(D) L(1, chi_D) / 2
    let real = [(5, 1), (8, 1), (12, 1), (21, 1), (40, 2), (60, 2), (65, 2), (79 * 4, 3), (229, 3), (985, 6), (1596, 8)];
    for (d, h) in real {
        assert_eq!(class_group(Discriminant::fundamental(d).unwrap()).unwrap().h, h, "D={d}");
    }
}

#[test]
fn rho_is_multiplicative() {
    for d in fundamental_discriminants(-500, -3) {
        let dv = d.value();
        let table: Vec<u64> = (0..=200u64).map(|a| if a == 0 { 0 } else { rho(dv, a) }).collect();
        for m in 1..=200u64 {
            for n in 1..=200 / m {
                if m.gcd(&n) == 1 {
                    assert_eq!(table[(m * n) as usize], table[m as usize] * table[n as usize], "D={dv} m={m} n={n}");
                }
            }
        }
    }
}

#[test]
fn rho_prime_powers() {
    for d in fundamental_discriminants(-300, 300) {
        let dv = d.value();
        for p in [2u64, 3, 5, 7, 11, 13] {
            for alpha in 1..=4u32 {
                let pa = p.pow(alpha);
                let want = if dv % p as i64 != 0 {
                    (1 + kronecker_chi(dv, p as i64)) as u64
                } else if alpha == 1 {
                    1
                } else {
                    0
                };
                assert_eq!(rho(dv, pa), want, "D={dv} p^a={pa}");
            }
        }
    }
}

#[test]
fn heegner_points_of_reduced_forms_are_reduced() {
    for d in fundamental_discriminants(-3000, -3) {
        for f in enumerate_reduced(d).unwrap() {
            let z = heegner_point(&f).unwrap();
            let y = invariant_height(z).unwrap();
            let want = (d.abs() as f64).sqrt() / (2.0 * f.a as f64);
            assert!((y - want).abs() < 1e-12 * want, "{f}");
        }
    }
}

#[test]
fn enumeration_count_matches_class_number_formula() {
    // h(D) = w sqrt|D| L(1, chi_D) / (2 pi), with L(1) summed to high accuracy
    for dv in [-23i64, -47, -104, -163, -231] {
        let q = -dv;
        let mut l1 = 0.0;
        for n in 1..2_000_000i64 {
            l1 += kronecker_chi(dv, n) as f64 / n as f64;
        }
        let h = enumerate_reduced(Discriminant::fundamental(dv).unwrap()).unwrap().len() as f64;
        let formula = 2.0 * (q as f64).sqrt() * l1 / (2.0 * std::f64::consts::PI);
        assert!((h - formula).abs() < 0.01, "D={dv}: {h} vs {formula}");
    }
}

proptest! {
    #[test]
    fn reduction_and_composition_preserve_discriminant(a in 1i64..400, b in -400i64..400, c in 1i64..400) {
        let f = QuadraticForm::new(a, b, c);
        prop_assume!(f.disc() < 0);
        let (r, w) = reduce_definite(&f).unwrap();
        prop_assert_eq!(r.disc(), f.disc());
        prop_assert_eq!(f.transform(&w), r);
        prop_assert!(-r.a < r.b && r.b <= r.a && r.a <= r.c);
        prop_assert!(r.a != r.c || r.b >= 0);
        if f.is_primitive() {
            let g = compose(&f, &r).unwrap();
            prop_assert_eq!(g.disc(), f.disc());
            prop_assert_eq!(g, compose(&r, &f).unwrap());
        }
    }
}
