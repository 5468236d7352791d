//! Finitely presented algebras `K[vars]/I` and Z^n-gradings on them.

use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::coeff::{Field, Rational};
use crate::groebner::{buchberger, GroebnerBasis, GroebnerError, MonomialOrder};
use crate::parse_io::{format_monomial, parse_expression, ParseError};
use crate::poly::{PolyError, PolyRing, Polynomial, WeightVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("relations generate the unit ideal")]
    UnitIdeal,
    #[error("{source_kind} `{relation}` is not homogeneous for grading row {row}: {first} and {second} have different degrees")]
    Inhomogeneous {
        source_kind: &'static str,
        relation: String,
        row: usize,
        first: String,
        second: String,
    },
    #[error("grading matrix must have {expected} columns, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("projection matrix does not have full row rank")]
    RankDeficient,
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("element belongs to a different algebra")]
    ContextMismatch,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// `K[vars]/⟨relations⟩` with a reduced Gröbner basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedAlgebra {
    ring: Arc<PolyRing>,
    relations: Vec<Polynomial>,
    basis: GroebnerBasis,
    unit_pairs: Vec<(usize, usize)>,
}

impl PresentedAlgebra {
    pub fn new(ring: &Arc<PolyRing>, relations: Vec<Polynomial>) -> Result<Arc<Self>, AlgebraError> {
        Self::with_order(ring, relations, MonomialOrder::Grevlex)
    }

    pub fn with_order(
        ring: &Arc<PolyRing>,
        relations: Vec<Polynomial>,
        order: MonomialOrder,
    ) -> Result<Arc<Self>, AlgebraError> {
        let mut seen = std::collections::HashSet::new();
        for v in ring.vars() {
            if !seen.insert(v) {
                return Err(AlgebraError::DuplicateVariable(v.clone()));
            }
        }
        let relations = relations
            .into_iter()
            .map(|r| r.embed(ring))
            .collect::<Result<Vec<_>, _>>()?;
        let basis = buchberger(ring, &relations, &order)?;
        if basis.is_unit_ideal() {
            return Err(AlgebraError::UnitIdeal);
        }
        let unit_pairs = relations.iter().filter_map(unit_pair).collect();
        Ok(Arc::new(Self {
            ring: ring.clone(),
            relations,
            basis,
            unit_pairs,
        }))
    }

    /// Parses relation strings in a fresh ring.
    pub fn parse(field: Field, vars: &[&str], relations: &[&str]) -> Result<Arc<Self>, AlgebraError> {
        let ring = PolyRing::new(field, vars.iter().copied());
        let rels = relations
            .iter()
            .map(|r| parse_expression(r, &ring))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(&ring, rels)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn vars(&self) -> &[String] {
        self.ring.vars()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.basis
    }

    pub fn order(&self) -> &MonomialOrder {
        self.basis.order()
    }

    /// Pairs `(u, v)` read off relations of the exact shape `c·(uv − 1)`.
    pub fn unit_pairs(&self) -> &[(usize, usize)] {
        &self.unit_pairs
    }

    pub fn inverse_var(&self, var: usize) -> Option<usize> {
        self.unit_pairs.iter().find_map(|&(u, v)| {
            if u == var {
                Some(v)
            } else if v == var {
                Some(u)
            } else {
                None
            }
        })
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.ring, i)
    }

    pub fn var_named(&self, name: &str) -> Result<Polynomial, AlgebraError> {
        Ok(Polynomial::var_named(&self.ring, name)?)
    }

    pub fn parse_poly(&self, text: &str) -> Result<Polynomial, ParseError> {
        parse_expression(text, &self.ring)
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        self.basis.normal_form(f)
    }

    pub fn is_zero(&self, f: &Polynomial) -> bool {
        self.basis.is_member(f)
    }

    pub fn equal(&self, a: &Polynomial, b: &Polynomial) -> bool {
        self.is_zero(&(a - b))
    }

    pub fn element(self: &Arc<Self>, f: &Polynomial) -> Result<AlgebraElement, AlgebraError> {
        if !Arc::ptr_eq(f.ring(), &self.ring) && **f.ring() != *self.ring {
            return Err(AlgebraError::ContextMismatch);
        }
        Ok(AlgebraElement {
            algebra: self.clone(),
            rep: self.normal_form(f),
        })
    }

    /// Attaches a grading; every relation and every basis element must be
    /// homogeneous with respect to every row.
    pub fn attach_grading(self: &Arc<Self>, matrix: Vec<Vec<i64>>) -> Result<Grading, AlgebraError> {
        let rows: Vec<WeightVector> = matrix
            .into_iter()
            .map(|row| {
                if row.len() != self.nvars() {
                    Err(AlgebraError::Dimension {
                        expected: self.nvars(),
                        found: row.len(),
                    })
                } else {
                    Ok(WeightVector::new(row))
                }
            })
            .collect::<Result<_, _>>()?;
        let vars = self.vars();
        let check = |polys: &[Polynomial], kind: &'static str| -> Result<(), AlgebraError> {
            for (r, w) in rows.iter().enumerate() {
                for p in polys {
                    if let Err((a, b)) = p.homogeneity(w) {
                        return Err(AlgebraError::Inhomogeneous {
                            source_kind: kind,
                            relation: p.to_string(),
                            row: r,
                            first: format_monomial(&a, vars),
                            second: format_monomial(&b, vars),
                        });
                    }
                }
            }
            Ok(())
        };
        check(&self.relations, "relation")?;
        check(self.basis.generators(), "basis element")?;
        Ok(Grading {
            algebra: self.clone(),
            rows,
        })
    }
}

fn unit_pair(r: &Polynomial) -> Option<(usize, usize)> {
    if r.num_terms() != 2 {
        return None;
    }
    let terms = r.sorted_terms();
    let (m, c) = terms[0];
    let (one, d) = terms[1];
    if !one.is_one() || !(c + d).is_zero() {
        return None;
    }
    let e = m.exponents();
    let vars: Vec<usize> = (0..e.len()).filter(|&i| e[i] > 0).collect();
    if vars.len() == 2 && e[vars[0]] == 1 && e[vars[1]] == 1 {
        Some((vars[0], vars[1]))
    } else {
        None
    }
}

/// Z^n-grading: row `r` gives the r-th weight of each variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    algebra: Arc<PresentedAlgebra>,
    rows: Vec<WeightVector>,
}

impl Grading {
    pub fn algebra(&self) -> &Arc<PresentedAlgebra> {
        &self.algebra
    }

    pub fn rows(&self) -> &[WeightVector] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, r: usize) -> &WeightVector {
        &self.rows[r]
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.rows.iter().map(|w| w.as_slice().to_vec()).collect()
    }

    pub fn var_degree(&self, var: usize) -> Vec<i64> {
        self.rows.iter().map(|w| w.as_slice()[var]).collect()
    }

    /// Degree vector of each relation (zero relations are skipped).
    pub fn relation_degrees(&self) -> Vec<Vec<i64>> {
        self.algebra
            .relations()
            .iter()
            .filter(|r| !r.is_zero())
            .map(|r| {
                self.rows
                    .iter()
                    .map(|w| r.homogeneity(w).ok().flatten().expect("checked at attach time"))
                    .collect()
            })
            .collect()
    }

    /// Pushforward along a surjection `pi: Z^n → Z^k` given as a k×n matrix.
    pub fn coarsen(&self, pi: &[Vec<i64>]) -> Result<Grading, AlgebraError> {
        let n = self.rows.len();
        for row in pi {
            if row.len() != n {
                return Err(AlgebraError::Dimension {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        if pi.len() > n || rank(pi) < pi.len() {
            return Err(AlgebraError::RankDeficient);
        }
        let nv = self.algebra.nvars();
        let rows = pi
            .iter()
            .map(|p| {
                WeightVector::new(
                    (0..nv)
                        .map(|v| p.iter().zip(&self.rows).map(|(c, w)| c * w.as_slice()[v]).sum())
                        .collect(),
                )
            })
            .collect();
        Ok(Grading {
            algebra: self.algebra.clone(),
            rows,
        })
    }

    /// Graded components of an element along one row, in normal form.
    pub fn components(&self, f: &Polynomial, row: usize) -> std::collections::BTreeMap<i64, Polynomial> {
        self.algebra.normal_form(f).weighted_components(&self.rows[row])
    }
}

fn rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank {
                let f = &a[r][c] / &a[rank][c];
                for k in 0..cols {
                    let v = &f * &a[rank][k];
                    a[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A coset representative kept in normal form.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    algebra: Arc<PresentedAlgebra>,
    rep: Polynomial,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.ring() == other.algebra.ring() && self.rep == other.rep
    }
}

impl AlgebraElement {
    pub fn algebra(&self) -> &Arc<PresentedAlgebra> {
        &self.algebra
    }

    pub fn representative(&self) -> &Polynomial {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    fn lift(&self, rep: Polynomial) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            rep: self.algebra.normal_form(&rep),
        }
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: Self) -> AlgebraElement {
        self.lift(&self.rep + &rhs.rep)
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: Self) -> AlgebraElement {
        self.lift(&self.rep - &rhs.rep)
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: Self) -> AlgebraElement {
        self.lift(&self.rep * &rhs.rep)
    }
}

impl std::fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.rep.fmt(f)
    }
}
