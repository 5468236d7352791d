//! Seeded random samples shared by the property suites.
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use suspensia_core::coeff::{CyclotomicNumber, Field, Rational};
use suspensia_core::poly::{Monomial, PolyRing, Polynomial};

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn small_rational(rng: &mut TestRng, bound: i64) -> Rational {
    let n = rng.gen_range(-bound..=bound);
    let d = rng.gen_range(1..=bound.max(1));
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn nonzero_rational(rng: &mut TestRng, bound: i64) -> Rational {
    loop {
        let q = small_rational(rng, bound);
        if q != Rational::from_integer(BigInt::from(0)) {
            return q;
        }
    }
}

pub fn coefficient(rng: &mut TestRng, field: Field) -> CyclotomicNumber {
    match field {
        Field::Rational => CyclotomicNumber::from_rational(nonzero_rational(rng, 5)),
        Field::Cyclotomic(p) => loop {
            let c: Vec<Rational> = (0..p - 1).map(|_| small_rational(rng, 3)).collect();
            let c = CyclotomicNumber::from_power_coeffs(p, c);
            if !c.is_zero() {
                return c;
            }
        },
    }
}

/// Up to `terms` terms, each variable exponent at most `max_exp` and total
/// degree at most `max_deg`; only variables in `vars` (all if empty).
pub fn polynomial(
    rng: &mut TestRng,
    ring: &Arc<PolyRing>,
    terms: usize,
    max_exp: u32,
    max_deg: u32,
    vars: &[usize],
) -> Polynomial {
    let n = ring.nvars();
    let active: Vec<usize> = if vars.is_empty() { (0..n).collect() } else { vars.to_vec() };
    let mut f = Polynomial::zero(ring);
    for _ in 0..rng.gen_range(1..=terms) {
        let mut e = vec![0u32; n];
        let mut deg = 0;
        for &v in &active {
            let k = rng.gen_range(0..=max_exp).min(max_deg - deg);
            e[v] = k;
            deg += k;
        }
        let c = coefficient(rng, ring.field());
        f.add_term(Monomial::new(e), c);
    }
    f
}
