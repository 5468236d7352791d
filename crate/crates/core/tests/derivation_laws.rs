mod common;

use std::sync::Arc;

use common::{fixture, polynomial, rng, TestRng};
use rand::Rng;
use suspensia_core::algebra::PresentedAlgebra;
use suspensia_core::coeff::{CyclotomicNumber, Field};
use suspensia_core::constructions::{build_vandermonde_lnd, yp_grading};
use suspensia_core::derivation::{Derivation, Homogeneity, Nu, DEFAULT_CAP};
use suspensia_core::parse_io::load_algebra_file;
use suspensia_core::poly::Polynomial;

fn leibniz_holds(d: &Derivation, rng: &mut TestRng, cases: usize) -> bool {
    let a = d.algebra();
    (0..cases).all(|_| {
        let f = polynomial(rng, a.ring(), 4, 2, 4, &[]);
        let g = polynomial(rng, a.ring(), 4, 2, 4, &[]);
        let lhs = d.apply(&(&f * &g));
        let rhs = &(&f * &d.apply(&g)) + &(&g * &d.apply(&f));
        a.equal(&lhs, &rhs)
    })
}

fn nu_value(n: Nu) -> Option<i64> {
    match n {
        Nu::MinusInfinity => Some(i64::MIN),
        Nu::Finite(k) => Some(k as i64),
        Nu::Inconclusive => None,
    }
}

fn degree_laws(d: &Derivation, rng: &mut TestRng, cases: usize, vars: &[usize]) {
    let a = d.algebra();
    for _ in 0..cases {
        let f = polynomial(rng, a.ring(), 3, 2, 3, vars);
        let g = polynomial(rng, a.ring(), 3, 2, 3, vars);
        let nf = nu_value(d.nu(&f, DEFAULT_CAP)).expect("certified LND");
        let ng = nu_value(d.nu(&g, DEFAULT_CAP)).expect("certified LND");
        let nfg = nu_value(d.nu(&(&f * &g), DEFAULT_CAP)).unwrap();
        let nsum = nu_value(d.nu(&(&f + &g), DEFAULT_CAP)).unwrap();
        let expected = if nf == i64::MIN || ng == i64::MIN { i64::MIN } else { nf + ng };
        assert_eq!(nfg, expected, "nu(fg) for f = {f}, g = {g}");
        assert!(nsum <= nf.max(ng), "nu(f+g) for f = {f}, g = {g}");
    }
}

#[test]
fn leibniz_on_test_algebras() {
    let mut r = rng(1);
    let plane = PresentedAlgebra::parse(Field::Rational, &["x", "y"], &[]).unwrap();
    let d = Derivation::from_named(&plane, &[("x", "y^2 - 3"), ("y", "x*y")]).unwrap();
    assert!(leibniz_holds(&d, &mut r, 200));
    let torus = PresentedAlgebra::parse(Field::Rational, &["y", "w"], &["y*w - 1"]).unwrap();
    let d = Derivation::from_named(&torus, &[("y", "y"), ("w", "-w")]).unwrap();
    assert!(leibniz_holds(&d, &mut r, 200));
    let v = build_vandermonde_lnd(3).unwrap();
    assert!(leibniz_holds(&v.derivation, &mut r, 200));
}

#[test]
fn degree_function_on_plane() {
    let plane = PresentedAlgebra::parse(Field::Rational, &["x", "y"], &[]).unwrap();
    let d = Derivation::from_named(&plane, &[("x", "1"), ("y", "0")]).unwrap();
    degree_laws(&d, &mut rng(2), 200, &[]);
}

#[test]
fn degree_function_on_y3() {
    let v = build_vandermonde_lnd(3).unwrap();
    degree_laws(&v.derivation, &mut rng(3), 200, &[]);
}

#[test]
fn vandermonde_nu_examples() {
    let v = build_vandermonde_lnd(3).unwrap();
    let a = &v.algebra;
    let d = &v.derivation;
    assert_eq!(d.nu(&a.var_named("z").unwrap(), DEFAULT_CAP), Nu::Finite(1));
    assert_eq!(d.nu(&Polynomial::zero(a.ring()), DEFAULT_CAP), Nu::MinusInfinity);
    // oracle: iterate the Leibniz map in the free ring, reducing only at the end
    let x0 = a.var_named("x0").unwrap();
    let mut f = x0.clone();
    let mut n = 0;
    loop {
        let next = d.apply_raw(&f);
        if a.normal_form(&next).is_zero() {
            break;
        }
        f = next;
        n += 1;
    }
    assert_eq!(d.nu(&x0, DEFAULT_CAP), Nu::Finite(n));
    assert_eq!(n, 2);
}

#[test]
fn exp_group_law() {
    let mut r = rng(4);
    let plane = PresentedAlgebra::parse(Field::Rational, &["x", "y"], &[]).unwrap();
    let tri = Derivation::from_named(&plane, &[("x", "0"), ("y", "x")]).unwrap();
    let v = build_vandermonde_lnd(3).unwrap();
    for d in [&tri, &v.derivation] {
        let cert = d.certify_lnd(DEFAULT_CAP);
        for _ in 0..20 {
            let s = CyclotomicNumber::from_rational(common::small_rational(&mut r, 7));
            let t = CyclotomicNumber::from_rational(common::small_rational(&mut r, 7));
            assert!(d.exp_group_law(&cert, &s, &t).unwrap());
        }
    }
    let cert = v.derivation.certify_lnd(DEFAULT_CAP);
    let m = v.derivation.exp(&cert, &Field::Rational.one()).unwrap();
    let inv = v.derivation.exp(&cert, &Field::Rational.from_int(-1)).unwrap();
    assert!(m.is_inverse_of(&inv));
}

#[test]
fn decomposition_of_fixtures() {
    let mut r = rng(5);
    let cases = [
        ("line.json", "std"),
        ("plane.json", "std"),
        ("y3_graded.json", "deg"),
        ("uv_plane.json", "torus"),
    ];
    let mut count = 0;
    for (file, grading) in cases {
        let loaded = load_algebra_file(fixture(file)).unwrap();
        let g = loaded.grading(grading).unwrap();
        for (name, images) in &loaded.derivations {
            let d = Derivation::new(&loaded.algebra, images.clone()).unwrap();
            let dec = d.decompose(g, 0).unwrap();
            assert!(dec.reconstructs(&d), "{file}/{name}");
            for (i, c) in &dec.components {
                assert_eq!(c.homogeneous_degree(g), Homogeneity::Degree(vec![*i]));
                assert!(leibniz_holds(c, &mut r, 20), "{file}/{name} component {i}");
            }
            if d.certify_lnd(DEFAULT_CAP).is_certified() {
                assert!(dec.lowest().unwrap().certify_lnd(DEFAULT_CAP).is_certified());
                assert!(dec.highest().unwrap().certify_lnd(DEFAULT_CAP).is_certified());
            }
            count += 1;
        }
    }
    assert_eq!(count, 10);
}

#[test]
fn vandermonde_is_homogeneous_on_yp() {
    for p in [3, 5] {
        let v = build_vandermonde_lnd(p).unwrap();
        let g = yp_grading(&v.algebra, p).unwrap();
        assert_eq!(v.derivation.homogeneous_degree(&g), Homogeneity::Degree(vec![p as i64 - 2]));
        let dec = v.derivation.decompose(&g, 0).unwrap();
        assert_eq!(dec.components.len(), 1);
    }
}

fn monomials_of_bidegree(a: &Arc<PresentedAlgebra>, rows: &[Vec<i64>], target: [i64; 2]) -> Vec<Polynomial> {
    let n = a.nvars();
    let mut out = vec![];
    let mut e = vec![0u32; n];
    loop {
        let deg: Vec<i64> = rows
            .iter()
            .map(|r| r.iter().zip(&e).map(|(w, &k)| w * k as i64).sum())
            .collect();
        if deg == target {
            out.push(Polynomial::term(
                a.ring(),
                suspensia_core::poly::Monomial::new(e.clone()),
                Field::Rational.one(),
            ));
        }
        let mut i = 0;
        while i < n {
            e[i] += 1;
            if e[i] <= 3 {
                break;
            }
            e[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out
}

/// Random homogeneous derivations of `y1 y2 = x` under a Z²-grading, pushed
/// along random surjections.
#[test]
fn coarsening_pushes_degree_forward() {
    let mut r = rng(6);
    let a = PresentedAlgebra::parse(Field::Rational, &["x", "y1", "y2"], &["y1*y2 - x"]).unwrap();
    let rows = vec![vec![0, 1, -1], vec![2, 1, 1]];
    let g = a.attach_grading(rows.clone()).unwrap();
    let mut made = 0;
    while made < 20 {
        let f0 = [r.gen_range(-2..=2i64), r.gen_range(-2..=2i64)];
        let pick = |r: &mut TestRng, target: [i64; 2]| {
            let mut acc = Polynomial::zero(a.ring());
            for m in monomials_of_bidegree(&a, &rows, target) {
                if r.gen_bool(0.6) {
                    acc = &acc + &m.scale(&common::coefficient(r, Field::Rational));
                }
            }
            acc
        };
        let d1 = pick(&mut r, [f0[0] + 1, f0[1] + 1]);
        let d2 = pick(&mut r, [f0[0] - 1, f0[1] + 1]);
        let dx = &(&a.var(2) * &d1) + &(&a.var(1) * &d2);
        let d = Derivation::new(&a, vec![dx, d1, d2]).unwrap();
        if d.is_zero() {
            continue;
        }
        assert_eq!(d.homogeneous_degree(&g), Homogeneity::Degree(f0.to_vec()));
        let mut pushed = 0;
        while pushed < 5 {
            let k = r.gen_range(1..=2);
            let pi: Vec<Vec<i64>> = (0..k).map(|_| vec![r.gen_range(-3..=3), r.gen_range(-3..=3)]).collect();
            let Ok(coarse) = g.coarsen(&pi) else { continue };
            let expected: Vec<i64> = pi.iter().map(|row| row[0] * f0[0] + row[1] * f0[1]).collect();
            assert_eq!(d.homogeneous_degree(&coarse), Homogeneity::Degree(expected));
            pushed += 1;
        }
        made += 1;
    }
}
