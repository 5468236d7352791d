mod common;

use std::collections::BTreeMap;

use common::fixture;
use proptest::prelude::*;
use suspensia_core::algebra::PresentedAlgebra;
use suspensia_core::coeff::{root_of_unity, CyclotomicNumber, Field};
use suspensia_core::constructions::*;
use suspensia_core::derivation::{Nu, DEFAULT_CAP};
use suspensia_core::parse_io::{load_algebra, load_algebra_file, load_derivation, AlgebraFile, DerivationFile};
use suspensia_core::poly::WeightVector;
use suspensia_core::suspension::*;

/// Independent expansion of `∏_i Σ_j ε_i^j x_j y^j`: one product per choice
/// of term in each factor, accumulated by exponent vector.
fn brute_force_f(p: u32) -> BTreeMap<Vec<u32>, CyclotomicNumber> {
    let n = p as usize + 3;
    let mut acc: BTreeMap<Vec<u32>, CyclotomicNumber> = BTreeMap::new();
    let total = (p as usize).pow(p);
    for mut code in 0..total {
        let mut e = vec![0u32; n];
        let mut c = CyclotomicNumber::one(p);
        for i in 1..=p {
            let j = (code % p as usize) as u32;
            code /= p as usize;
            e[j as usize] += 1;
            e[p as usize] += j;
            let k = (i * j) % p;
            c = &c * &root_of_unity(p, if k == 0 { p } else { k }).unwrap();
        }
        let entry = acc.entry(e).or_insert_with(|| CyclotomicNumber::zero(p));
        *entry = &*entry + &c;
    }
    acc.retain(|_, c| !c.is_zero());
    acc
}

#[test]
fn f_matches_brute_force() {
    for p in [3, 5] {
        let f = build_f(p).unwrap().f;
        let oracle = brute_force_f(p);
        assert_eq!(f.num_terms(), oracle.len());
        for (m, c) in f.terms() {
            assert_eq!(oracle.get(m.exponents()), Some(c));
        }
        assert!(oracle.values().all(CyclotomicNumber::is_rational));
    }
}

#[test]
fn f_divisibility_and_products() {
    for p in [3, 5, 7] {
        let lf = linear_forms(p).unwrap();
        let fp = build_f(p).unwrap();
        assert_eq!(lf.product(), fp.f);
        assert!(fp.f.terms().all(|(m, c)| m.exponents()[p as usize] % p == 0 && c.is_rational()));
        assert!(inverse_vandermonde_identity(p).unwrap());
    }
}

#[test]
fn xp_gradings() {
    for p in [3, 5] {
        let (_, g) = build_xp(p).unwrap();
        assert_eq!(g.relation_degrees(), vec![vec![2 * p as i64], vec![0]]);
    }
}

#[test]
fn vandermonde_relation_images_vanish_identically() {
    for p in [3, 5, 7] {
        let v = build_vandermonde_lnd(p).unwrap();
        assert!(v.derivation.well_defined().iter().all(|c| c.raw_image_zero));
        assert!(v.branches.iter().all(|b| *b == YPowerBranch::Direct));
        let z = v.algebra.var_named("z").unwrap();
        let d = &v.derivation;
        assert!(d.apply_raw(&d.apply_raw(&z)).is_zero());
    }
}

#[test]
fn vandermonde_p5_certificate() {
    let v = build_vandermonde_lnd(5).unwrap();
    let c = v.derivation.certify_lnd(DEFAULT_CAP);
    assert!(c.is_certified());
    for j in 0..5 {
        assert_eq!(c.order(&format!("x{j}")), Some(Nu::Finite(2)));
    }
    assert_eq!(c.order("z"), Some(Nu::Finite(1)));
    assert_eq!(c.order("y"), Some(Nu::Finite(0)));
    assert_eq!(c.order("w"), Some(Nu::Finite(0)));
}

#[test]
fn shipped_yp3_fixture() {
    let a = load_algebra(fixture("yp3.json")).unwrap();
    let b = build_yp(3).unwrap();
    assert_eq!(a.relations(), b.relations());
    assert_eq!(AlgebraFile::from_algebra(&a), AlgebraFile::from_algebra(&b));
}

#[test]
fn emitted_files_reload_identically() {
    let dir = std::env::temp_dir().join(format!("suspensia-family-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let v = build_vandermonde_lnd(3).unwrap();
    let g = yp_grading(&v.algebra, 3).unwrap();
    let text = AlgebraFile::from_algebra(&v.algebra).with_grading("deg", &g).to_json();
    std::fs::write(dir.join("Yp.json"), &text).unwrap();
    let loaded = load_algebra_file(dir.join("Yp.json")).unwrap();
    let again = AlgebraFile::from_algebra(&loaded.algebra)
        .with_grading("deg", loaded.grading("deg").unwrap())
        .to_json();
    assert_eq!(again, text);
    let dtext = DerivationFile::from_derivation(&v.derivation, "Yp.json").to_json();
    std::fs::write(dir.join("d.json"), &dtext).unwrap();
    let d = load_derivation(dir.join("d.json"), &loaded.algebra).unwrap();
    assert_eq!(d, v.derivation);
    assert_eq!(DerivationFile::from_derivation(&d, "Yp.json").to_json(), dtext);
    std::fs::remove_dir_all(&dir).unwrap();
}

fn x3() -> std::sync::Arc<PresentedAlgebra> {
    build_xp(3).unwrap().0
}

#[test]
fn suspension_over_x3() {
    let x = x3();
    let s = suspend(&x, &x.var_named("s").unwrap(), &[2, 3]).unwrap();
    assert_eq!(s.algebra.nvars(), 8);
    let hand = PresentedAlgebra::with_order(
        s.algebra.ring(),
        vec![
            s.algebra.parse_poly("x2^3*s^2 - 3*x0*x1*x2*s + x1^3*s + x0^3 - z^2").unwrap(),
            s.algebra.parse_poly("s*w^3 - 1").unwrap(),
            s.algebra.parse_poly("y1^2*y2^3 - s").unwrap(),
        ],
        s.algebra.order().clone(),
    )
    .unwrap();
    assert_eq!(hand.basis().generators(), s.algebra.basis().generators());
}

#[test]
fn torus_weights_vanish_on_relations() {
    let x = x3();
    for ks in [vec![1, 1], vec![2, 3], vec![2, 2], vec![2, 3, 5], vec![4, 6]] {
        let s = suspend(&x, &x.var_named("s").unwrap(), &ks).unwrap();
        let t = torus_action(&s).unwrap();
        for row in t.matrix() {
            let w = WeightVector::new(row);
            for r in s.algebra.relations() {
                assert!(r.terms().all(|(m, _)| m.weight(&w) == 0));
            }
        }
    }
}

#[test]
fn trivial_suspensions_are_isomorphic_to_base() {
    let bases: Vec<(std::sync::Arc<PresentedAlgebra>, &str)> = vec![
        (load_algebra(fixture("line.json")).unwrap(), "x^2 + 1"),
        (load_algebra(fixture("plane.json")).unwrap(), "x*y"),
        (load_algebra(fixture("torus_line.json")).unwrap(), "y + w"),
        (load_algebra(fixture("uv_plane.json")).unwrap(), "y1 - y2"),
        (x3(), "x0 + s"),
    ];
    let uv = &bases[3].0;
    assert!(matches!(suspend(uv, &uv.var(0), &[1]), Err(SuspensionError::NameCollision(_))));
    for (x, f) in bases {
        let s = suspend_named(&x, &x.parse_poly(f).unwrap(), &[1], &["t".to_string()]).unwrap();
        assert!(s.eliminated_matches_base().unwrap(), "{f}");
    }
}

#[test]
fn lifted_orders_transfer() {
    let v = build_vandermonde_lnd(3).unwrap();
    let cert = v.derivation.certify_lnd(DEFAULT_CAP);
    for e in [1, 2, 3] {
        let l = lift_lnd_through_root(&v.derivation, &cert, "y", "u", e).unwrap();
        for var in ["x0", "x1", "x2", "z", "w"] {
            assert_eq!(l.certificate.order(var), cert.order(var));
        }
        let root = if e == 1 { "y" } else { "u" };
        assert_eq!(l.certificate.order(root), Some(Nu::Finite(0)));
    }
    let x = x3();
    let s = suspend(&x, &x.var_named("s").unwrap(), &[2, 2]).unwrap();
    let zero = suspensia_core::derivation::Derivation::zero(&x);
    let l = lift_lnd(&zero, &zero.certify_lnd(8), &s).unwrap();
    assert!(l.derivation.is_zero() && l.certificate.is_certified());
}

#[test]
fn x3_collapse_from_y3() {
    let y3 = build_yp(3).unwrap();
    let ring = y3.ring();
    let rels = vec![y3.relations()[0].clone(), y3.parse_poly("y^3*w^3 - 1").unwrap()];
    let alt = PresentedAlgebra::with_order(ring, rels, y3.order().clone()).unwrap();
    let x = collapse_root(&alt, "y", "s", 3).unwrap();
    assert_eq!(AlgebraFile::from_algebra(&x).relations, AlgebraFile::from_algebra(&x3()).relations);
    assert!(collapse_root(&y3, "y", "s", 3).is_err());
}

#[test]
fn fmj_pair() {
    let (x, y) = build_fmj_pair(1).unwrap();
    assert_eq!(x.relations()[0], x.parse_poly("x^2 + y^2*s^3 + z^3").unwrap());
    assert_eq!(y.relations()[0], y.parse_poly("x^2 + y^2*u^6 + z^3").unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gcd_criterion_is_order_invariant(ks in proptest::collection::vec(1u32..40, 1..5), rot in 0usize..5) {
        let a = gcd_criterion(&ks).unwrap();
        let mut permuted = ks.clone();
        let len = permuted.len();
        permuted.rotate_left(rot % len);
        permuted.reverse();
        let b = gcd_criterion(&permuted).unwrap();
        prop_assert_eq!(a.d, b.d);
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(gcd_criterion(&ks).unwrap(), a.clone());
        prop_assert_eq!(a.verdict == Verdict::RigidityPreserved, a.d == 1);
        prop_assert!(ks.iter().all(|k| k % a.d == 0));
    }
}

#[test]
fn field_of_constructions() {
    assert_eq!(build_yp(3).unwrap().field(), Field::Cyclotomic(3));
    assert_eq!(x3().field(), Field::Rational);
}
