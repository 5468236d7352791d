use std::sync::Arc;

use num_bigint::BigInt;

use super::{Derivation, DerivationError, LndCertificate, Nu};
use crate::algebra::PresentedAlgebra;
use crate::coeff::Rational;
use crate::parse_io::format_polynomial;
use crate::poly::{Coeff, Polynomial};

/// Algebra homomorphism `source → target` given by generator images
/// (normal forms in the target).
#[derive(Debug, Clone)]
pub struct AlgebraMorphism {
    source: Arc<PresentedAlgebra>,
    target: Arc<PresentedAlgebra>,
    images: Vec<Polynomial>,
}

impl AlgebraMorphism {
    /// Checks that every relation of `source` maps into the ideal of
    /// `target`.
    pub fn new(
        source: &Arc<PresentedAlgebra>,
        target: &Arc<PresentedAlgebra>,
        images: Vec<Polynomial>,
    ) -> Result<Self, DerivationError> {
        if images.len() != source.nvars() {
            return Err(DerivationError::Arity {
                expected: source.nvars(),
                found: images.len(),
            });
        }
        let images: Vec<Polynomial> = images.iter().map(|p| target.normal_form(p)).collect();
        let m = AlgebraMorphism {
            source: source.clone(),
            target: target.clone(),
            images,
        };
        for r in source.relations() {
            let img = m.apply(r);
            if !img.is_zero() {
                return Err(DerivationError::NotAMorphism {
                    relation: format_polynomial(r),
                    image: format_polynomial(&img),
                });
            }
        }
        Ok(m)
    }

    pub fn identity(a: &Arc<PresentedAlgebra>) -> Self {
        let images = (0..a.nvars()).map(|i| a.normal_form(&a.var(i))).collect();
        AlgebraMorphism {
            source: a.clone(),
            target: a.clone(),
            images,
        }
    }

    pub fn source(&self) -> &Arc<PresentedAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PresentedAlgebra> {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        self.target.normal_form(&f.evaluate(&self.images, self.target.ring()))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AlgebraMorphism) -> Result<AlgebraMorphism, DerivationError> {
        if inner.target.ring() != self.source.ring() {
            return Err(DerivationError::ContextMismatch);
        }
        Ok(AlgebraMorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            images: inner.images.iter().map(|p| self.apply(p)).collect(),
        })
    }

    /// Equality on generators, which determines the morphism.
    pub fn agrees_with(&self, other: &AlgebraMorphism) -> bool {
        self.source.ring() == other.source.ring()
            && self.target.ring() == other.target.ring()
            && self.images.iter().zip(&other.images).all(|(a, b)| self.target.equal(a, b))
    }

    pub fn is_identity(&self) -> bool {
        self.agrees_with(&AlgebraMorphism::identity(&self.source))
    }

    /// Both composites are the identity.
    pub fn is_inverse_of(&self, other: &AlgebraMorphism) -> bool {
        matches!(self.compose(other), Ok(c) if c.is_identity())
            && matches!(other.compose(self), Ok(c) if c.is_identity())
    }
}

impl Derivation {
    /// `exp(t∂)`: `x_i ↦ Σ_{j ≤ ν(x_i)} tʲ ∂ʲ(x_i) / j!`. The sums are exact
    /// because the certificate bounds ν on each generator.
    pub fn exp(&self, cert: &LndCertificate, t: &Coeff) -> Result<AlgebraMorphism, DerivationError> {
        if !cert.is_certified() || cert.orders.len() != self.algebra().nvars() {
            return Err(DerivationError::NotCertified(cert.cap));
        }
        let a = self.algebra();
        let ring = a.ring();
        let images = (0..a.nvars())
            .map(|i| {
                let n = match cert.orders.get(&a.vars()[i]) {
                    Some(Nu::Finite(n)) => *n,
                    _ => return Polynomial::zero(ring),
                };
                let mut acc = Polynomial::zero(ring);
                let mut term = a.normal_form(&a.var(i));
                let mut factorial = BigInt::from(1);
                for j in 0..=n {
                    if j > 0 {
                        term = self.apply(&term);
                        factorial *= j;
                    }
                    let c = t.pow(j).scale(&Rational::new(BigInt::from(1), factorial.clone()));
                    acc = &acc + &term.scale(&c);
                }
                acc
            })
            .collect();
        AlgebraMorphism::new(a, a, images)
    }

    /// `exp(s∂) ∘ exp(t∂) = exp((s+t)∂)` on generators.
    pub fn exp_group_law(&self, cert: &LndCertificate, s: &Coeff, t: &Coeff) -> Result<bool, DerivationError> {
        let lhs = self.exp(cert, s)?.compose(&self.exp(cert, t)?)?;
        let rhs = self.exp(cert, &(s + t))?;
        Ok(lhs.agrees_with(&rhs))
    }
}
