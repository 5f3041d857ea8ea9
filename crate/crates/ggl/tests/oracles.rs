mod common;

use common::{cyclotomic, dense_int, n_series_dense, random_fgl, rng, Q, Z};
use ggl::completion::{classify, n_series};
use ggl::euler::{euler_class, psi, psi_table};
use ggl::fgl::TruncatedFGL;
use ggl::groups::GroupSpec;
use ggl::laws::{additive_law, from_fgl, kan_value, multiplicative_law, value};
use ggl::lazard::{universal_relations, validate_fgl, Mode, ViolationKind};
use ggl::poly::Monomial;
use ggl::ring::{int, Coef};
use num_bigint::BigInt;

#[test]
fn cyclotomic_polynomials_against_recursive_division() {
    let m = multiplicative_law(Z);
    let table = psi_table(&*m, 60).unwrap();
    for (n, p) in &table {
        assert_eq!(dense_int(&p.poly), cyclotomic(*n as usize), "n = {n}");
    }
    // first cyclotomic polynomial with a coefficient outside {-1, 0, 1}
    let p105 = dense_int(&psi(&*m, 105).unwrap().poly);
    assert_eq!(p105, cyclotomic(105));
    assert_eq!(p105[7], -2);
    assert_eq!(psi(&*m, 12).unwrap().poly.to_string(), "t^4 - t^2 + 1");
    assert_eq!(psi(&*m, 8).unwrap().poly.to_string(), "t^4 + 1");
}

#[test]
fn additive_psi_is_the_coordinate_times_units() {
    // e_n = n e, so psi_p = p and psi_n = 1 unless n is a prime power
    let q = additive_law(Z);
    let v = value(&*q, &GroupSpec::Torus(1)).unwrap();
    let s: Vec<String> = (1..=12).map(|n| v.fmt(&psi(&*q, n).unwrap().poly)).collect();
    assert_eq!(s, ["e", "2", "3", "2", "5", "1", "7", "2", "3", "1", "11", "1"]);
    let divisors: Vec<u64> = psi_table(&*q, 12).unwrap().into_keys().collect();
    assert_eq!(divisors, [1, 2, 3, 4, 6, 12]);
}

#[test]
fn multiplicative_n_series_are_binomial() {
    let f = classify(&*multiplicative_law(Z), Some(8)).unwrap();
    for n in 1..=6i64 {
        let s = n_series(&f, n).unwrap();
        for d in 1..=8i64 {
            // (1 + x)^n - 1
            let mut b = BigInt::from(1);
            for i in 0..d {
                b = b * (n - i) / (i + 1);
            }
            assert_eq!(s.poly().coefficient(&Monomial(vec![d])), Coef::from_integer(b), "n = {n}, d = {d}");
        }
    }
}

#[test]
fn n_series_of_random_laws_match_dense_iteration() {
    let mut r = rng(21);
    for _ in 0..4 {
        let f = random_fgl(&mut r, 6);
        for n in 1..=4 {
            let s = n_series(&f, n).unwrap();
            for (d, c) in n_series_dense(&f, n as u32).iter().enumerate() {
                assert_eq!(s.poly().coefficient(&Monomial(vec![d as i64])), *c);
            }
        }
    }
}

#[test]
fn lazard_ranks() {
    // one indecomposable in every even degree over Q
    let sys = universal_relations(8, Mode::Plain).unwrap();
    for d in sys.indecomposable_ranks().iter().filter(|d| d.complete) {
        assert_eq!(d.indecomposables, 1, "{d:?}");
    }
    // 2-torsion laws: generators x_i for i not of the form 2^k - 1
    let sys = universal_relations(8, Mode::TwoTorsion).unwrap();
    for d in sys.indecomposable_ranks().iter().filter(|d| d.complete) {
        let i = d.grading / 2;
        let want = usize::from(!(i + 1).is_power_of_two());
        assert_eq!(d.indecomposables, want, "{d:?}");
    }
    assert_eq!(sys.constant_relations(), vec![int(2)]);
    assert!(universal_relations(6, Mode::Plain).unwrap().constant_relations().is_empty());
}

#[test]
fn residuals_vanish_on_valid_laws() {
    let sys = universal_relations(6, Mode::Plain).unwrap();
    let mut r = rng(22);
    for f in [TruncatedFGL::multiplicative(Q, 6), TruncatedFGL::additive(Q, 6), random_fgl(&mut r, 6)] {
        assert!(sys.residuals(&f).unwrap().iter().all(|(_, c)| *c == int(0)));
    }
}

#[test]
fn planted_associativity_defect() {
    let f = TruncatedFGL::new(Q, 5, &[(2, 2, int(3))]).unwrap();
    let v = validate_fgl(&f);
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].kind, ViolationKind::Associativity);
    assert_eq!(v[0].degree, 4);
    assert_eq!(v[0].at, vec![vec![2, 1, 1], vec![1, 1, 2]]);
}

#[test]
fn euler_classes_and_values() {
    let a = additive_law(Z);
    let g = GroupSpec::Torus(3);
    let v = value(&*a, &g).unwrap();
    assert_eq!(v.fmt(&euler_class(&*a, &g, &[1, -2, 3]).unwrap().poly), "e1 - 2*e2 + 3*e3");
    let m = multiplicative_law(Z);
    let mixed: GroupSpec = "T^2 / [2,0]".parse().unwrap();
    assert_eq!(kan_value(&*m, &mixed).unwrap().describe(&*m).unwrap(), "Z[t1^+-1, t2^+-1] / (t1^2 - 1)");
    let f = from_fgl(TruncatedFGL::multiplicative(Q, 4)).unwrap();
    let t = GroupSpec::Torus(1);
    let vt = value(&*f, &t).unwrap();
    assert_eq!(vt.fmt_elem(&euler_class(&*f, &t, &[2]).unwrap()), "x^2 + 2*x + O(5)");
}
