//! Exact coefficient arithmetic over Q and the cyclotomic fields Q(ζ_p).
//!
//! A [`CyclotomicNumber`] of order `p` is stored in the basis 1, ζ, …, ζ^{p−2}
//! of Q[t]/Φ_p(t), where Φ_p = 1 + t + … + t^{p−1}. Order 1 is the rational
//! field itself (Φ_1 = t − 1), so every coefficient in the crate is a
//! `CyclotomicNumber` and rational constants promote into any order.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("root index {index} out of range 1..={p}")]
    RootIndex { p: u32, index: u32 },
    #[error("mismatched cyclotomic orders {0} and {1}")]
    Mismatch(u32, u32),
    #[error("inverse of zero")]
    DivisionByZero,
    #[error("unrecognised field descriptor `{0}`")]
    Descriptor(String),
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Coefficient field of a polynomial ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Cyclotomic(u32),
}

impl Field {
    pub fn cyclotomic(p: u32) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(Field::Cyclotomic(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    /// Cyclotomic order; 1 for Q.
    pub fn order(self) -> u32 {
        match self {
            Field::Rational => 1,
            Field::Cyclotomic(p) => p,
        }
    }

    pub fn from_order(order: u32) -> Self {
        if order == 1 {
            Field::Rational
        } else {
            Field::Cyclotomic(order)
        }
    }

    pub fn degree(self) -> usize {
        basis_len(self.order())
    }

    pub fn zero(self) -> CyclotomicNumber {
        CyclotomicNumber::zero(self.order())
    }

    pub fn one(self) -> CyclotomicNumber {
        CyclotomicNumber::one(self.order())
    }

    pub fn from_rational(self, q: Rational) -> CyclotomicNumber {
        CyclotomicNumber::from_rational(q).promote(self.order())
    }

    pub fn from_int(self, n: i64) -> CyclotomicNumber {
        self.from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// Parses `Q` or `Q(z@p)`.
    pub fn parse(descriptor: &str) -> Result<Self, FieldError> {
        let s = descriptor.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        let inner = s
            .strip_prefix("Q(z@")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| FieldError::Descriptor(s.to_string()))?;
        let p: u32 = inner
            .parse()
            .map_err(|_| FieldError::Descriptor(s.to_string()))?;
        Field::cyclotomic(p)
    }

    pub fn descriptor(self) -> String {
        match self {
            Field::Rational => "Q".to_string(),
            Field::Cyclotomic(p) => format!("Q(z@{p})"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

fn basis_len(order: u32) -> usize {
    if order == 1 {
        1
    } else {
        order as usize - 1
    }
}

/// Element of Q(ζ_p) in the basis 1, ζ, …, ζ^{p−2}.
#[derive(Debug, Clone)]
pub struct CyclotomicNumber {
    order: u32,
    coeffs: Vec<Rational>,
}

// A rational element compares equal to its promotion into any order.
impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for CyclotomicNumber {}

impl CyclotomicNumber {
    pub fn zero(order: u32) -> Self {
        Self {
            order,
            coeffs: vec![Rational::zero(); basis_len(order)],
        }
    }

    pub fn one(order: u32) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = Rational::one();
        z
    }

    pub fn from_rational(q: Rational) -> Self {
        Self {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// Builds an element from coordinates of any length in powers of ζ,
    /// reducing modulo Φ_p.
    pub fn from_power_coeffs(order: u32, powers: Vec<Rational>) -> Self {
        Self::reduce(order, powers)
    }

    /// Coordinates in the canonical basis.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn field(&self) -> Field {
        Field::from_order(self.order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Re-expresses a rational element (order 1) in a higher order field.
    /// Elements already of `order` are returned unchanged.
    pub fn promote(mut self, order: u32) -> Self {
        if self.order == order || order == 1 {
            return self;
        }
        debug_assert_eq!(self.order, 1, "cannot promote between distinct primes");
        self.coeffs.resize(basis_len(order), Rational::zero());
        self.order = order;
        self
    }

    fn common_order(&self, other: &Self) -> Result<u32, FieldError> {
        match (self.order, other.order) {
            (a, b) if a == b => Ok(a),
            (1, b) => Ok(b),
            (a, 1) => Ok(a),
            (a, b) => Err(FieldError::Mismatch(a, b)),
        }
    }

    /// Folds coordinates in powers of ζ back into the canonical basis.
    fn reduce(order: u32, powers: Vec<Rational>) -> Self {
        if order == 1 {
            let sum = powers.into_iter().fold(Rational::zero(), |a, b| a + b);
            return Self::from_rational(sum);
        }
        let p = order as usize;
        let mut folded = vec![Rational::zero(); p];
        for (k, c) in powers.into_iter().enumerate() {
            if !c.is_zero() {
                folded[k % p] += c;
            }
        }
        // ζ^{p−1} = −(1 + ζ + … + ζ^{p−2})
        let top = folded.pop().expect("p >= 2");
        if !top.is_zero() {
            for c in folded.iter_mut() {
                *c -= &top;
            }
        }
        Self {
            order,
            coeffs: folded,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        let order = self.common_order(other)?;
        let mut out = self.clone().promote(order);
        for (i, c) in other.coeffs.iter().enumerate() {
            out.coeffs[i] += c;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        let order = self.common_order(other)?;
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(q).promote(order));
        }
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(q).promote(order));
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut prod = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::reduce(order, prod))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in
    /// Q[t] against Φ_p.
    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(q.recip()).promote(self.order));
        }
        let p = self.order as usize;
        let modulus = vec![Rational::one(); p];
        let a = trim(self.coeffs.clone());
        // Invariant: s_i * a ≡ r_i (mod Φ_p)
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1) = (Vec::<Rational>::new(), vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = upoly_divrem(&r0, &r1);
            let s2 = upoly_sub(&s0, &upoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            debug_assert!(!r1.is_empty(), "Φ_p is irreducible, gcd must be a unit");
        }
        let c = r1[0].recip();
        let inv: Vec<Rational> = s1.iter().map(|x| x * &c).collect();
        Ok(Self::reduce(self.order, inv))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.try_mul(&other.inverse()?)
    }

    /// Rendering as a polynomial expression in `z@p`, e.g. `-1 - z@3`.
    pub fn to_expression(&self) -> String {
        let sym = format!("z@{}", self.order);
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let power = match k {
                0 => String::new(),
                1 => sym.clone(),
                _ => format!("{sym}^{k}"),
            };
            if k == 0 {
                out.push_str(&fmt_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&power);
            } else {
                out.push_str(&fmt_rational(&abs));
                out.push('*');
                out.push_str(&power);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// ε_i = ζ^i for 1 ≤ i ≤ p, with ε_p = 1 and ε_1 = ζ primitive.
pub fn root_of_unity(p: u32, i: u32) -> Result<CyclotomicNumber, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if i == 0 || i > p {
        return Err(FieldError::RootIndex { p, index: i });
    }
    let mut powers = vec![Rational::zero(); (i % p) as usize + 1];
    powers[(i % p) as usize] = Rational::one();
    Ok(CyclotomicNumber::reduce(p, powers))
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expression())
    }
}

impl Zero for CyclotomicNumber {
    fn zero() -> Self {
        CyclotomicNumber::zero(1)
    }
    fn is_zero(&self) -> bool {
        CyclotomicNumber::is_zero(self)
    }
}

impl One for CyclotomicNumber {
    fn one() -> Self {
        CyclotomicNumber::one(1)
    }
}

// Operator impls panic on mismatched primes; use the `try_*` methods where
// operands come from untrusted input.
impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: Self) -> CyclotomicNumber {
        self.try_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: Self) -> CyclotomicNumber {
        self.try_sub(rhs).expect("cyclotomic order mismatch")
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: Self) -> CyclotomicNumber {
        self.try_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl Div for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn div(self, rhs: Self) -> CyclotomicNumber {
        self.try_div(rhs).expect("cyclotomic division failed")
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: Self) -> CyclotomicNumber {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

// Dense univariate helpers over Q, lowest degree first, no trailing zeros.

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn upoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

fn upoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn upoly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = &b[db];
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / lead;
        for (i, x) in b.iter().enumerate() {
            rem[shift + i] -= &c * x;
        }
        quot[shift] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn zeta(p: u32) -> CyclotomicNumber {
        root_of_unity(p, 1).unwrap()
    }

    // Reduction oracle for p = 3: ζ² = −1 − ζ.
    fn reduce_p3(powers: &[i64]) -> (i64, i64) {
        let (mut a, mut b) = (0, 0);
        for (k, c) in powers.iter().enumerate() {
            match k % 3 {
                0 => a += c,
                1 => b += c,
                _ => {
                    a -= c;
                    b -= c;
                }
            }
        }
        (a, b)
    }

    #[test]
    fn roots_of_unity_p3() {
        assert!(root_of_unity(3, 3).unwrap().is_one());
        let sum = (1..=3).fold(CyclotomicNumber::zero(3), |acc, i| {
            &acc + &root_of_unity(3, i).unwrap()
        });
        assert!(sum.is_zero());
        let prod = &root_of_unity(3, 1).unwrap() * &root_of_unity(3, 2).unwrap();
        assert_eq!(reduce_p3(&[0, 0, 0, 1]), (1, 0));
        assert!(prod.is_one());
    }

    #[test]
    fn epsilon_two_is_minus_one_minus_zeta() {
        let e2 = root_of_unity(3, 2).unwrap();
        let (a, b) = reduce_p3(&[0, 0, 1]);
        assert_eq!(e2.coeffs(), &[q(a, 1), q(b, 1)]);
        assert_eq!(e2.to_expression(), "-1 - z@3");
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(root_of_unity(4, 1), Err(FieldError::NotPrime(4)));
        assert_eq!(
            root_of_unity(5, 6),
            Err(FieldError::RootIndex { p: 5, index: 6 })
        );
        assert!(Field::cyclotomic(9).is_err());
    }

    #[test]
    fn inverse_of_zeta() {
        let inv = zeta(3).inverse().unwrap();
        assert_eq!(inv, root_of_unity(3, 2).unwrap());
        let (a, b) = reduce_p3(&[0, -1, -1]);
        assert_eq!((a, b), (1, 0));
        assert!((&zeta(3) * &inv).is_one());
    }

    #[test]
    fn product_of_all_roots() {
        for p in [3u32, 5, 7] {
            let prod = (1..=p).fold(CyclotomicNumber::one(p), |acc, i| {
                &acc * &root_of_unity(p, i).unwrap()
            });
            // (−1)^{p+1} = 1 for odd p
            assert!(prod.is_one(), "p={p}");
        }
        let a = &zeta(5) + &CyclotomicNumber::from_int(3);
        assert_eq!(&a * &CyclotomicNumber::one(5), a);
    }

    #[test]
    fn errors() {
        assert_eq!(
            zeta(3).try_add(&zeta(5)),
            Err(FieldError::Mismatch(3, 5))
        );
        assert_eq!(
            CyclotomicNumber::zero(3).inverse(),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn power_sums_and_elementary_symmetric() {
        for p in [2u32, 3, 5, 7] {
            let roots: Vec<_> = (1..=p).map(|i| root_of_unity(p, i).unwrap()).collect();
            for k in 1..p {
                let s = roots
                    .iter()
                    .fold(CyclotomicNumber::zero(p), |acc, e| &acc + &e.pow(k));
                assert!(s.is_zero(), "power sum p={p} k={k}");
            }
            // ∏(t − ε_i), lowest degree first
            let mut poly = vec![CyclotomicNumber::one(p)];
            for e in &roots {
                let mut next = vec![CyclotomicNumber::zero(p); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i + 1] = &next[i + 1] + c;
                    next[i] = &next[i] - &(c * e);
                }
                poly = next;
            }
            assert!((&poly[0] + &CyclotomicNumber::one(p)).is_zero());
            assert!(poly[p as usize].is_one());
            for c in &poly[1..p as usize] {
                assert!(c.is_zero());
            }
        }
    }

    #[test]
    fn field_descriptor_round_trip() {
        for f in [Field::Rational, Field::Cyclotomic(3), Field::Cyclotomic(7)] {
            assert_eq!(Field::parse(&f.descriptor()).unwrap(), f);
        }
        assert!(Field::parse("Q(z@4)").is_err());
        assert!(Field::parse("R").is_err());
    }

    fn element(p: u32) -> impl Strategy<Value = CyclotomicNumber> {
        prop::collection::vec((-9i64..=9, 1i64..=4), p as usize - 1).prop_map(move |v| {
            CyclotomicNumber::from_power_coeffs(p, v.into_iter().map(|(n, d)| q(n, d)).collect())
        })
    }

    fn triple() -> impl Strategy<Value = (CyclotomicNumber, CyclotomicNumber, CyclotomicNumber)> {
        prop_oneof![
            (element(3), element(3), element(3)),
            (element(5), element(5), element(5)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn field_axioms((a, b, c) in triple()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inverse().unwrap()).is_one());
            }
        }
    }
}
