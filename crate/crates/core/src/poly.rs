//! Sparse multivariate polynomials keyed by exponent vectors.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::coeff::{CyclotomicNumber, Field};
use crate::groebner::MonomialOrder;

pub type Coeff = CyclotomicNumber;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live in different rings")]
    ContextMismatch,
    #[error("variable `{0}` has no binding and no counterpart in the target ring")]
    UnboundVariable(String),
    #[error("monomial {monomial} has {var}-exponent not divisible by {divisor}")]
    NotDivisible {
        var: String,
        divisor: u32,
        monomial: String,
    },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

/// Coefficient field plus ordered variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: Field,
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new<S: Into<String>>(field: Field, vars: impl IntoIterator<Item = S>) -> Arc<Self> {
        Arc::new(Self {
            field,
            vars: vars.into_iter().map(Into::into).collect(),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn weight(&self, w: &WeightVector) -> i64 {
        self.0.iter().zip(w.as_slice()).map(|(&e, &wt)| e as i64 * wt).sum()
    }

    /// Graded-lex comparison used for every serialized form.
    pub fn cmp_graded_lex(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// One integer weight per variable; a row of a Z^n grading.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<i64>);

impl WeightVector {
    pub fn new(weights: Vec<i64>) -> Self {
        WeightVector(weights)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: HashMap<Monomial, Coeff>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Self {
            ring: ring.clone(),
            terms: HashMap::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Coeff) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(Monomial::one(ring.nvars()), c);
        p
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn from_int(ring: &Arc<PolyRing>, n: i64) -> Self {
        Self::constant(ring, ring.field().from_int(n))
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self::term(ring, Monomial::var(ring.nvars(), i), ring.field().one())
    }

    pub fn var_named(ring: &Arc<PolyRing>, name: &str) -> Result<Self, PolyError> {
        ring.index_of(name)
            .map(|i| Self::var(ring, i))
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub fn term(ring: &Arc<PolyRing>, m: Monomial, c: Coeff) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Coeff> {
        self.terms.get(m)
    }

    /// The constant value, if the polynomial has no non-constant term.
    pub fn constant_value(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(self.field().zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        debug_assert_eq!(m.exponents().len(), self.ring.nvars());
        if c.is_zero() {
            return;
        }
        let order = self.ring.field().order();
        match self.terms.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c.promote(order));
            }
        }
    }

    pub fn remove_term(&mut self, m: &Monomial) -> Option<Coeff> {
        self.terms.remove(m)
    }

    /// `self += c · m · other`, in place.
    pub fn add_scaled(&mut self, other: &Polynomial, m: &Monomial, c: &Coeff) {
        for (n, x) in &other.terms {
            self.add_term(n.mul(m), x * c);
        }
    }

    /// Terms in descending graded-lex order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Coeff)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.cmp_graded_lex(a.0));
        v
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Coeff)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponents()[var]).max()
    }

    /// Indices of variables that occur with positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.keys().any(|m| m.exponents()[i] > 0))
            .collect()
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Self {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Self {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(n, x)| (n.mul(m), x * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        if !self.same_ring(other) {
            return Err(PolyError::ContextMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        if !self.same_ring(other) {
            return Err(PolyError::ContextMismatch);
        }
        let mut out = Self::zero(&self.ring);
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (m, a) in &small.terms {
            for (n, b) in &large.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            out.add_term(Monomial(exps), c.scale(&crate::coeff::Rational::from_integer(e.into())));
        }
        out
    }

    /// Decomposition into weight-homogeneous components, keyed by weight.
    pub fn weighted_components(&self, w: &WeightVector) -> BTreeMap<i64, Polynomial> {
        let mut out: BTreeMap<i64, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weight(w))
                .or_insert_with(|| Self::zero(&self.ring))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn top_weight(&self, w: &WeightVector) -> Option<i64> {
        self.terms.keys().map(|m| m.weight(w)).max()
    }

    /// The common weight of all terms, or a pair of monomials of distinct
    /// weights. The zero polynomial is homogeneous of every weight (`None`).
    pub fn homogeneity(&self, w: &WeightVector) -> Result<Option<i64>, (Monomial, Monomial)> {
        let mut sorted = self.sorted_terms().into_iter();
        let Some((first, _)) = sorted.next() else {
            return Ok(None);
        };
        let wt = first.weight(w);
        for (m, _) in sorted {
            if m.weight(w) != wt {
                return Err((first.clone(), m.clone()));
            }
        }
        Ok(Some(wt))
    }

    /// Evaluation homomorphism sending variable `i` to `images[i]`; all
    /// images must share one target ring.
    pub fn evaluate(&self, images: &[Polynomial], target: &Arc<PolyRing>) -> Polynomial {
        assert_eq!(images.len(), self.ring.nvars());
        let mut cache: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(target);
        for (m, c) in self.sorted_terms() {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = cache
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e))
                    .clone();
                t = &t * &pw;
            }
            for (n, x) in t.terms {
                out.add_term(n, x);
            }
        }
        out
    }

    /// Substitutes `bindings` (by variable name) and carries every other
    /// variable over to the same-named variable of `target`.
    pub fn substitute(
        &self,
        bindings: &BTreeMap<String, Polynomial>,
        target: &Arc<PolyRing>,
    ) -> Result<Polynomial, PolyError> {
        let images = self.images_for(bindings, target)?;
        Ok(self.evaluate(&images, target))
    }

    fn images_for(
        &self,
        bindings: &BTreeMap<String, Polynomial>,
        target: &Arc<PolyRing>,
    ) -> Result<Vec<Polynomial>, PolyError> {
        self.ring
            .vars()
            .iter()
            .map(|name| {
                if let Some(p) = bindings.get(name) {
                    if Arc::ptr_eq(p.ring(), target) || **p.ring() == **target {
                        Ok(p.clone())
                    } else {
                        Err(PolyError::ContextMismatch)
                    }
                } else if let Some(j) = target.index_of(name) {
                    Ok(Polynomial::var(target, j))
                } else {
                    Err(PolyError::UnboundVariable(name.clone()))
                }
            })
            .collect()
    }

    /// Re-expresses the polynomial in `target`, matching variables by name.
    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<Polynomial, PolyError> {
        if Arc::ptr_eq(&self.ring, target) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self.ring.vars().iter().map(|v| target.index_of(v)).collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.nvars()];
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => exps[j] = e,
                    None => return Err(PolyError::UnboundVariable(self.ring.vars()[i].clone())),
                }
            }
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Verified rewrite `var^e ↦ new_var`: every exponent of `var` must be
    /// divisible by `e`; other variables are matched by name in `target`.
    pub fn collapse_power(
        &self,
        var: &str,
        e: u32,
        new_var: &str,
        target: &Arc<PolyRing>,
    ) -> Result<Polynomial, PolyError> {
        let src = self
            .ring
            .index_of(var)
            .ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        let dst = target
            .index_of(new_var)
            .ok_or_else(|| PolyError::UnknownVariable(new_var.to_string()))?;
        let mut map = Vec::with_capacity(self.ring.nvars());
        for (i, v) in self.ring.vars().iter().enumerate() {
            if i == src {
                map.push(dst);
            } else {
                map.push(target.index_of(v).ok_or_else(|| PolyError::UnboundVariable(v.clone()))?);
            }
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in self.sorted_terms() {
            let mut exps = vec![0; target.nvars()];
            for (i, &k) in m.exponents().iter().enumerate() {
                if i == src {
                    if k % e != 0 {
                        return Err(PolyError::NotDivisible {
                            var: var.to_string(),
                            divisor: e,
                            monomial: crate::parse_io::format_monomial(m, self.ring.vars()),
                        });
                    }
                    exps[map[i]] += k / e;
                } else {
                    exps[map[i]] += k;
                }
            }
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Monic normalization with respect to `order`.
    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            Some((_, c)) => {
                let inv = c.inverse().expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse_io::format_polynomial(self))
    }
}

// Operator impls panic on mismatched rings; the `try_*` methods report it.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Self) -> Polynomial {
        self.try_add(rhs).expect("ring mismatch in polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Self) -> Polynomial {
        self.try_sub(rhs).expect("ring mismatch in polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Self) -> Polynomial {
        self.try_mul(rhs).expect("ring mismatch in polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Self) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
