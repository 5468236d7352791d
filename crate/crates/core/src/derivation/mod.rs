//! Derivations of presented algebras, given by images of the generators.
//!
//! A derivation is checked at construction: the Leibniz extension of the
//! image map must send every relation into the ideal. Local nilpotency is
//! certified on generators only; because `ν(a) = max{n : ∂ⁿa ≠ 0}` is a
//! degree function, finite ν on generators bounds ν on every element.

mod exp;
mod graded;

use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{AlgebraError, PresentedAlgebra};
use crate::parse_io::{format_polynomial, NamedMap};
use crate::poly::{Coeff, Polynomial};

pub use exp::AlgebraMorphism;
pub use graded::{Homogeneity, HomogeneousDecomposition, Homogenized};

pub const DEFAULT_CAP: u32 = 64;

pub const LND_JUSTIFICATION: &str = "every generator is annihilated by a finite power of the derivation; \
nu(ab) = nu(a) + nu(b) and nu(a + b) <= max(nu(a), nu(b)) then bound nu on every element";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("expected {expected} images, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("derivation is not well defined: image of relation `{relation}` reduces to {image}")]
    IllDefined { relation: String, image: String },
    #[error("not a morphism: relation `{relation}` maps to {image}")]
    NotAMorphism { relation: String, image: String },
    #[error("operands belong to different algebras")]
    ContextMismatch,
    #[error("derivation is zero")]
    Zero,
    #[error("derivation has no LND certificate (status inconclusive at cap {0})")]
    NotCertified(u32),
    #[error("grading row {row} out of range (rank {rank})")]
    Row { row: usize, rank: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Result of the well-definedness check for one relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RelationCheck {
    pub relation: String,
    /// Normal form of the image; always `0` for a constructed derivation.
    pub image: String,
    /// The image is already zero as a polynomial, before reduction.
    pub raw_image_zero: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nu {
    MinusInfinity,
    Finite(u32),
    Inconclusive,
}

impl Nu {
    pub fn value(self) -> Option<i64> {
        match self {
            Nu::Finite(n) => Some(n as i64),
            _ => None,
        }
    }

    pub fn is_known(self) -> bool {
        self != Nu::Inconclusive
    }
}

impl Serialize for Nu {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Nu::Finite(n) => s.serialize_u32(*n),
            Nu::MinusInfinity => s.serialize_str("-inf"),
            Nu::Inconclusive => s.serialize_str("inconclusive"),
        }
    }
}

impl std::fmt::Display for Nu {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Nu::Finite(n) => write!(f, "{n}"),
            Nu::MinusInfinity => f.write_str("-inf"),
            Nu::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LndStatus {
    Certified,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LndCertificate {
    pub status: LndStatus,
    pub cap: u32,
    /// ν of each generator, in variable order.
    pub orders: NamedMap<Nu>,
    pub justification: String,
}

impl LndCertificate {
    pub fn is_certified(&self) -> bool {
        self.status == LndStatus::Certified
    }

    pub fn order(&self, var: &str) -> Option<Nu> {
        self.orders.get(var).copied()
    }
}

/// The certificate document: well-definedness, LND status and (if a
/// grading was supplied) the homogeneous degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DerivationCertificate {
    pub well_defined: Vec<RelationCheck>,
    pub lnd: LndCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homogeneous: Option<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub struct Derivation {
    algebra: Arc<PresentedAlgebra>,
    images: Vec<Polynomial>,
    well_defined: Vec<RelationCheck>,
}

impl PartialEq for Derivation {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.ring() == other.algebra.ring() && self.images == other.images
    }
}

/// `Σ_i ∂f/∂x_i · images[i]` in the free ring.
fn leibniz(f: &Polynomial, images: &[Polynomial]) -> Polynomial {
    let mut out = Polynomial::zero(f.ring());
    for v in f.support_vars() {
        if images[v].is_zero() {
            continue;
        }
        out = &out + &(&f.partial(v) * &images[v]);
    }
    out
}

impl Derivation {
    /// Images are given in variable order.
    pub fn new(algebra: &Arc<PresentedAlgebra>, images: Vec<Polynomial>) -> Result<Self, DerivationError> {
        if images.len() != algebra.nvars() {
            return Err(DerivationError::Arity {
                expected: algebra.nvars(),
                found: images.len(),
            });
        }
        let images = images
            .into_iter()
            .map(|p| p.embed(algebra.ring()).map_err(AlgebraError::from))
            .collect::<Result<Vec<_>, _>>()?;
        let mut well_defined = Vec::with_capacity(algebra.relations().len());
        for r in algebra.relations() {
            let raw = leibniz(r, &images);
            let nf = algebra.normal_form(&raw);
            if !nf.is_zero() {
                return Err(DerivationError::IllDefined {
                    relation: format_polynomial(r),
                    image: format_polynomial(&nf),
                });
            }
            well_defined.push(RelationCheck {
                relation: format_polynomial(r),
                image: "0".into(),
                raw_image_zero: raw.is_zero(),
            });
        }
        let images = images.iter().map(|p| algebra.normal_form(p)).collect();
        Ok(Derivation {
            algebra: algebra.clone(),
            images,
            well_defined,
        })
    }

    pub fn from_named(algebra: &Arc<PresentedAlgebra>, images: &[(&str, &str)]) -> Result<Self, DerivationError> {
        let ring = algebra.ring();
        let mut imgs = vec![Polynomial::zero(ring); algebra.nvars()];
        for (name, text) in images {
            let i = ring
                .index_of(name)
                .ok_or_else(|| AlgebraError::Poly(crate::poly::PolyError::UnknownVariable(name.to_string())))?;
            imgs[i] = algebra.parse_poly(text).map_err(AlgebraError::from)?;
        }
        Self::new(algebra, imgs)
    }

    pub fn zero(algebra: &Arc<PresentedAlgebra>) -> Self {
        Self::new(algebra, vec![Polynomial::zero(algebra.ring()); algebra.nvars()]).expect("zero is a derivation")
    }

    pub fn algebra(&self) -> &Arc<PresentedAlgebra> {
        &self.algebra
    }

    /// Normal forms of the generator images.
    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn image(&self, var: usize) -> &Polynomial {
        &self.images[var]
    }

    pub fn well_defined(&self) -> &[RelationCheck] {
        &self.well_defined
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Polynomial::is_zero)
    }

    /// Leibniz extension to an arbitrary polynomial, without reduction.
    pub fn apply_raw(&self, f: &Polynomial) -> Polynomial {
        leibniz(f, &self.images)
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        self.algebra.normal_form(&self.apply_raw(f))
    }

    pub fn apply_iter(&self, f: &Polynomial, n: u32) -> Polynomial {
        let mut a = self.algebra.normal_form(f);
        for _ in 0..n {
            if a.is_zero() {
                break;
            }
            a = self.apply(&a);
        }
        a
    }

    /// `ν(a) = max{n : ∂ⁿa ≠ 0}`, searched up to `cap`.
    pub fn nu(&self, f: &Polynomial, cap: u32) -> Nu {
        let mut a = self.algebra.normal_form(f);
        if a.is_zero() {
            return Nu::MinusInfinity;
        }
        for n in 0..=cap {
            a = self.apply(&a);
            if a.is_zero() {
                return Nu::Finite(n);
            }
        }
        Nu::Inconclusive
    }

    pub fn certify_lnd(&self, cap: u32) -> LndCertificate {
        let orders: NamedMap<Nu> = (0..self.algebra.nvars())
            .map(|i| (self.algebra.vars()[i].clone(), self.nu(&self.algebra.var(i), cap)))
            .collect();
        let status = if orders.iter().all(|(_, n)| n.is_known()) {
            LndStatus::Certified
        } else {
            LndStatus::Inconclusive
        };
        LndCertificate {
            status,
            cap,
            orders,
            justification: LND_JUSTIFICATION.into(),
        }
    }

    pub fn certificate(&self, cap: u32, grading: Option<&crate::algebra::Grading>) -> DerivationCertificate {
        let homogeneous = grading.and_then(|g| match self.homogeneous_degree(g) {
            Homogeneity::Degree(v) => Some(v),
            Homogeneity::Zero => Some(vec![0; g.rank()]),
            Homogeneity::Inhomogeneous => None,
        });
        DerivationCertificate {
            well_defined: self.well_defined.clone(),
            lnd: self.certify_lnd(cap),
            homogeneous,
        }
    }

    pub fn scale(&self, c: &Coeff) -> Derivation {
        Derivation {
            algebra: self.algebra.clone(),
            images: self.images.iter().map(|p| p.scale(c)).collect(),
            well_defined: self.well_defined.clone(),
        }
    }

    /// `λ` with `∂(x_i) = λ_i x_i` for every generator, if it exists.
    pub fn is_diagonal_semisimple(&self) -> Option<Vec<Coeff>> {
        let field = self.algebra.field();
        let order = self.algebra.order();
        (0..self.algebra.nvars())
            .map(|i| {
                let x = self.algebra.normal_form(&self.algebra.var(i));
                let h = &self.images[i];
                let Some((m, c)) = x.leading_term(order) else {
                    return Some(field.zero());
                };
                let lambda = match h.coeff(m) {
                    Some(d) => d / c,
                    None => field.zero(),
                };
                (x.scale(&lambda) == *h).then_some(lambda)
            })
            .collect()
    }
}

impl std::fmt::Display for Derivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, (v, img)) in self.algebra.vars().iter().zip(&self.images).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "d({v}) = {img}")?;
        }
        Ok(())
    }
}
