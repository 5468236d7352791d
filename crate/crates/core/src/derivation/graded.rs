use std::collections::BTreeMap;

use super::{Derivation, DerivationError, LndCertificate};
use crate::algebra::Grading;
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero derivation is homogeneous of every degree.
    Zero,
    Degree(Vec<i64>),
    Inhomogeneous,
}

/// `∂ = Σ_{i=l}^{k} ∂_i` along one grading row; only nonzero components
/// are kept, each re-checked as a derivation.
#[derive(Debug, Clone)]
pub struct HomogeneousDecomposition {
    pub row: usize,
    pub components: BTreeMap<i64, Derivation>,
}

impl HomogeneousDecomposition {
    pub fn range(&self) -> Option<(i64, i64)> {
        let l = *self.components.keys().next()?;
        let k = *self.components.keys().next_back()?;
        Some((l, k))
    }

    pub fn lowest(&self) -> Option<&Derivation> {
        self.components.values().next()
    }

    pub fn highest(&self) -> Option<&Derivation> {
        self.components.values().next_back()
    }

    /// `Σ_i ∂_i(x_j) = ∂(x_j)` for every generator.
    pub fn reconstructs(&self, d: &Derivation) -> bool {
        (0..d.algebra().nvars()).all(|j| {
            let sum = self
                .components
                .values()
                .fold(Polynomial::zero(d.algebra().ring()), |acc, c| &acc + c.image(j));
            d.algebra().equal(&sum, d.image(j))
        })
    }
}

#[derive(Debug, Clone)]
pub struct Homogenized {
    pub derivation: Derivation,
    pub degree: Vec<i64>,
    pub certificate: LndCertificate,
}

impl Derivation {
    pub fn homogeneous_degree(&self, g: &Grading) -> Homogeneity {
        let mut degree = Vec::with_capacity(g.rank());
        for r in 0..g.rank() {
            let w = g.row(r);
            let mut shift = None;
            for (j, h) in self.images().iter().enumerate() {
                let Ok(Some(top)) = h.homogeneity(w) else {
                    if h.is_zero() {
                        continue;
                    }
                    return Homogeneity::Inhomogeneous;
                };
                let s = top - w.as_slice()[j];
                match shift {
                    None => shift = Some(s),
                    Some(t) if t != s => return Homogeneity::Inhomogeneous,
                    _ => {}
                }
            }
            match shift {
                Some(s) => degree.push(s),
                None => return Homogeneity::Zero,
            }
        }
        Homogeneity::Degree(degree)
    }

    /// Components with `∂_i(x_j)` the `(deg x_j + i)`-part of `∂(x_j)`.
    pub fn decompose(&self, g: &Grading, row: usize) -> Result<HomogeneousDecomposition, DerivationError> {
        if row >= g.rank() {
            return Err(DerivationError::Row { row, rank: g.rank() });
        }
        if g.algebra().ring() != self.algebra().ring() {
            return Err(DerivationError::ContextMismatch);
        }
        let a = self.algebra();
        let w = g.row(row);
        let mut parts: BTreeMap<i64, Vec<Polynomial>> = BTreeMap::new();
        for (j, h) in self.images().iter().enumerate() {
            for (deg, c) in h.weighted_components(w) {
                let i = deg - w.as_slice()[j];
                parts
                    .entry(i)
                    .or_insert_with(|| vec![Polynomial::zero(a.ring()); a.nvars()])[j] = c;
            }
        }
        let components = parts
            .into_iter()
            .map(|(i, imgs)| Ok((i, Derivation::new(a, imgs)?)))
            .collect::<Result<_, DerivationError>>()?;
        Ok(HomogeneousDecomposition { row, components })
    }

    /// Takes the top graded component row by row. For a locally nilpotent
    /// input every extreme component is again locally nilpotent; the result
    /// is re-certified rather than assumed.
    pub fn homogenize_lnd(&self, cert: &LndCertificate, g: &Grading) -> Result<Homogenized, DerivationError> {
        if !cert.is_certified() {
            return Err(DerivationError::NotCertified(cert.cap));
        }
        if self.is_zero() {
            return Err(DerivationError::Zero);
        }
        let mut d = self.clone();
        for r in 0..g.rank() {
            let dec = d.decompose(g, r)?;
            d = dec.highest().expect("nonzero derivation has a component").clone();
        }
        let degree = match d.homogeneous_degree(g) {
            Homogeneity::Degree(v) => v,
            other => unreachable!("top components are homogeneous, got {other:?}"),
        };
        let certificate = d.certify_lnd(cert.cap);
        Ok(Homogenized {
            derivation: d,
            degree,
            certificate,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PresentedAlgebra;
    use crate::coeff::Field;
    use crate::derivation::{Nu, DEFAULT_CAP};

    #[test]
    fn decompose_line() {
        let a = PresentedAlgebra::parse(Field::Rational, &["x"], &[]).unwrap();
        let g = a.attach_grading(vec![vec![1]]).unwrap();
        let d = Derivation::from_named(&a, &[("x", "x^2 + 1")]).unwrap();
        let dec = d.decompose(&g, 0).unwrap();
        assert_eq!(dec.range(), Some((-1, 1)));
        assert_eq!(dec.components[&-1].image(0).to_string(), "1");
        assert_eq!(dec.components[&1].image(0).to_string(), "x^2");
        assert!(dec.reconstructs(&d));
        assert_eq!(d.homogeneous_degree(&g), Homogeneity::Inhomogeneous);
        assert_eq!(dec.components[&1].homogeneous_degree(&g), Homogeneity::Degree(vec![1]));
    }

    #[test]
    fn homogeneous_input_is_single_component() {
        let a = PresentedAlgebra::parse(Field::Rational, &["x", "y"], &[]).unwrap();
        let g = a.attach_grading(vec![vec![1, 1]]).unwrap();
        let d = Derivation::from_named(&a, &[("x", "0"), ("y", "x^2")]).unwrap();
        let dec = d.decompose(&g, 0).unwrap();
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.highest(), Some(&d));
        let h = d.homogenize_lnd(&d.certify_lnd(DEFAULT_CAP), &g).unwrap();
        assert_eq!(h.derivation, d);
        assert_eq!(h.degree, vec![1]);
    }

    #[test]
    fn homogenize_takes_top() {
        let a = PresentedAlgebra::parse(Field::Rational, &["x", "y"], &[]).unwrap();
        let g = a.attach_grading(vec![vec![1, 1]]).unwrap();
        let d = Derivation::from_named(&a, &[("x", "0"), ("y", "x + x^2")]).unwrap();
        let h = d.homogenize_lnd(&d.certify_lnd(DEFAULT_CAP), &g).unwrap();
        assert_eq!(h.derivation.image(1).to_string(), "x^2");
        assert!(h.certificate.is_certified());
        assert_eq!(h.certificate.order("y"), Some(Nu::Finite(1)));
        assert!(matches!(
            Derivation::zero(&a).homogenize_lnd(&Derivation::zero(&a).certify_lnd(4), &g),
            Err(DerivationError::Zero)
        ));
    }

    #[test]
    fn homogenize_two_rows() {
        let a = PresentedAlgebra::parse(Field::Rational, &["x", "y", "z"], &[]).unwrap();
        let g = a.attach_grading(vec![vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let d = Derivation::from_named(&a, &[("x", "0"), ("y", "0"), ("z", "1 + x + y + x*y^2")]).unwrap();
        let h = d.homogenize_lnd(&d.certify_lnd(DEFAULT_CAP), &g).unwrap();
        assert_eq!(h.derivation.image(2).to_string(), "x*y^2");
        assert_eq!(h.degree, vec![0, 1]);
        for r in 0..2 {
            assert_eq!(h.derivation.image(2).weighted_components(g.row(r)).len(), 1);
        }
    }
}
