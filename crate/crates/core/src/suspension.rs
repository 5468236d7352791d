//! m-suspensions `Susp(X, f, k₁..k_m) = {y₁^{k₁}···y_m^{k_m} = f} ⊂ K^m × X`,
//! their torus actions, and lifting of derivations.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Grading, PresentedAlgebra};
use crate::derivation::{Derivation, DerivationError, LndCertificate};
use crate::groebner::{GroebnerBasis, GroebnerError, MonomialOrder};
use crate::parse_io::format_polynomial;
use crate::poly::{Monomial, PolyError, PolyRing, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuspensionError {
    #[error("f = {0} is constant in the base algebra")]
    ConstantFunction(String),
    #[error("variable name `{0}` already in use")]
    NameCollision(String),
    #[error("need at least one exponent")]
    NoExponents,
    #[error("exponents must be positive")]
    ZeroExponent,
    #[error("expected {expected} new variable names, found {found}")]
    Names { expected: usize, found: usize },
    #[error("torus action needs m >= 2 suspension variables")]
    EmptyTorus,
    #[error("torus weights are not zero on relation `{relation}` (row {row})")]
    TorusWeight { relation: String, row: usize },
    #[error("derivation does not annihilate f: d(f) reduces to {0}")]
    NotAnnihilated(String),
    #[error("derivation does not annihilate `{var}`: d({var}) = {image}")]
    NotInKernel { var: String, image: String },
    #[error("derivation lives on a different algebra")]
    ContextMismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

#[derive(Debug, Clone)]
pub struct SuspensionSpec {
    pub base: Arc<PresentedAlgebra>,
    /// Normal form of `f` in the base.
    pub f: Polynomial,
    pub exponents: Vec<u32>,
    pub d: u32,
    /// Indices of `y₁..y_m` in the suspension's ring.
    pub new_vars: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Suspension {
    pub algebra: Arc<PresentedAlgebra>,
    pub spec: SuspensionSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// d = 1: the suspension over any rigid variety is rigid.
    RigidityPreserved,
    /// d > 1: some rigid base admits a non-rigid suspension.
    CounterexamplePossible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub exponents: Vec<u32>,
    pub d: u32,
    pub verdict: Verdict,
}

pub fn gcd_criterion(ks: &[u32]) -> Result<CriterionReport, SuspensionError> {
    check_exponents(ks)?;
    let d = ks.iter().fold(0u32, |g, &k| g.gcd(&k));
    let verdict = if d == 1 {
        Verdict::RigidityPreserved
    } else {
        Verdict::CounterexamplePossible
    };
    Ok(CriterionReport {
        exponents: ks.to_vec(),
        d,
        verdict,
    })
}

fn check_exponents(ks: &[u32]) -> Result<(), SuspensionError> {
    if ks.is_empty() {
        return Err(SuspensionError::NoExponents);
    }
    if ks.contains(&0) {
        return Err(SuspensionError::ZeroExponent);
    }
    Ok(())
}

/// `y1..ym`.
pub fn default_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("y{i}")).collect()
}

pub fn suspend(x: &Arc<PresentedAlgebra>, f: &Polynomial, ks: &[u32]) -> Result<Suspension, SuspensionError> {
    suspend_named(x, f, ks, &default_names(ks.len()))
}

/// Adds variables `names` after those of `x` and the relation
/// `∏ y_i^{k_i} − f`. The order eliminates the new variables first and
/// falls back to the base order.
pub fn suspend_named(
    x: &Arc<PresentedAlgebra>,
    f: &Polynomial,
    ks: &[u32],
    names: &[String],
) -> Result<Suspension, SuspensionError> {
    check_exponents(ks)?;
    if names.len() != ks.len() {
        return Err(SuspensionError::Names {
            expected: ks.len(),
            found: names.len(),
        });
    }
    for (i, n) in names.iter().enumerate() {
        if x.ring().index_of(n).is_some() || names[..i].contains(n) {
            return Err(SuspensionError::NameCollision(n.clone()));
        }
    }
    let f = x.normal_form(&f.embed(x.ring())?);
    if f.is_constant() {
        return Err(SuspensionError::ConstantFunction(format_polynomial(&f)));
    }
    let n = x.nvars();
    let ring = PolyRing::new(x.field(), x.vars().iter().cloned().chain(names.iter().cloned()));
    let mut relations = x
        .relations()
        .iter()
        .map(|r| r.embed(&ring))
        .collect::<Result<Vec<_>, _>>()?;
    let mut exps = vec![0; n + ks.len()];
    exps[n..].copy_from_slice(ks);
    let product = Polynomial::term(&ring, Monomial::new(exps), x.field().one());
    relations.push(&product - &f.embed(&ring)?);
    let new_vars: Vec<usize> = (n..n + ks.len()).collect();
    let order = MonomialOrder::elimination(new_vars.clone(), x.order().clone());
    let algebra = PresentedAlgebra::with_order(&ring, relations, order)?;
    let d = gcd_criterion(ks)?.d;
    Ok(Suspension {
        algebra,
        spec: SuspensionSpec {
            base: x.clone(),
            f,
            exponents: ks.to_vec(),
            d,
            new_vars,
        },
    })
}

impl Suspension {
    pub fn criterion(&self) -> CriterionReport {
        gcd_criterion(&self.spec.exponents).expect("validated at construction")
    }

    /// Basis of the suspension ideal intersected with the base ring.
    pub fn eliminate_new_vars(&self) -> Result<GroebnerBasis, SuspensionError> {
        Ok(self.algebra.basis().eliminate(&self.spec.new_vars)?)
    }

    /// For `m = 1, k = 1` the suspension is the graph of `f`: eliminating
    /// `y` must give back exactly the reduced basis of the base.
    pub fn eliminated_matches_base(&self) -> Result<bool, SuspensionError> {
        let elim = self.eliminate_new_vars()?;
        let base = self.spec.base.basis();
        if elim.order() != base.order() {
            return Ok(false);
        }
        let mut a = elim
            .generators()
            .iter()
            .map(|g| g.embed(base.ring()))
            .collect::<Result<Vec<_>, _>>()?;
        let mut b = base.generators().to_vec();
        let key = |p: &Polynomial| format_polynomial(p);
        a.sort_by_key(key);
        b.sort_by_key(key);
        Ok(a == b)
    }
}

/// Integer weights of the (m−1)-torus acting on the suspension variables.
#[derive(Debug, Clone)]
pub struct TorusAction {
    pub grading: Grading,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorusFile {
    pub variables: Vec<String>,
    pub exponents: Vec<u32>,
    pub d: u32,
    pub weights: Vec<Vec<i64>>,
}

impl TorusAction {
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.grading.matrix()
    }

    pub fn to_file(&self, spec: &SuspensionSpec) -> TorusFile {
        TorusFile {
            variables: self.grading.algebra().vars().to_vec(),
            exponents: spec.exponents.clone(),
            d: spec.d,
            weights: self.matrix(),
        }
    }
}

/// Row `i` puts `k_m/d` on `y_i` and `−k_i/d` on `y_m`; every monomial of
/// every relation is checked to have weight 0.
pub fn torus_action(s: &Suspension) -> Result<TorusAction, SuspensionError> {
    let spec = &s.spec;
    let m = spec.exponents.len();
    if m < 2 {
        return Err(SuspensionError::EmptyTorus);
    }
    let d = spec.d as i64;
    let km = spec.exponents[m - 1] as i64;
    let ym = spec.new_vars[m - 1];
    let matrix: Vec<Vec<i64>> = (0..m - 1)
        .map(|i| {
            let mut row = vec![0; s.algebra.nvars()];
            row[spec.new_vars[i]] = km / d;
            row[ym] = -(spec.exponents[i] as i64) / d;
            row
        })
        .collect();
    for (r, row) in matrix.iter().enumerate() {
        let w = crate::poly::WeightVector::new(row.clone());
        for rel in s.algebra.relations() {
            if rel.terms().any(|(mono, _)| mono.weight(&w) != 0) {
                return Err(SuspensionError::TorusWeight {
                    relation: format_polynomial(rel),
                    row: r,
                });
            }
        }
    }
    let grading = s.algebra.attach_grading(matrix)?;
    Ok(TorusAction { grading })
}

#[derive(Debug, Clone)]
pub struct Lifted {
    pub algebra: Arc<PresentedAlgebra>,
    pub derivation: Derivation,
    pub certificate: LndCertificate,
}

fn require_certified(cert: &LndCertificate) -> Result<(), SuspensionError> {
    if cert.is_certified() {
        Ok(())
    } else {
        Err(DerivationError::NotCertified(cert.cap).into())
    }
}

/// Extends an LND of the base with `∂f = 0` by `y_i ↦ 0`.
pub fn lift_lnd(d: &Derivation, cert: &LndCertificate, s: &Suspension) -> Result<Lifted, SuspensionError> {
    require_certified(cert)?;
    if d.algebra().ring() != s.spec.base.ring() {
        return Err(SuspensionError::ContextMismatch);
    }
    let df = d.apply(&s.spec.f);
    if !df.is_zero() {
        return Err(SuspensionError::NotAnnihilated(format_polynomial(&df)));
    }
    let ring = s.algebra.ring();
    let mut images = d
        .images()
        .iter()
        .map(|p| p.embed(ring))
        .collect::<Result<Vec<_>, _>>()?;
    images.resize(ring.nvars(), Polynomial::zero(ring));
    let derivation = Derivation::new(&s.algebra, images)?;
    let certificate = derivation.certify_lnd(cert.cap);
    Ok(Lifted {
        algebra: s.algebra.clone(),
        derivation,
        certificate,
    })
}

fn renamed_ring(a: &PresentedAlgebra, var: usize, new: &str) -> Result<Arc<PolyRing>, SuspensionError> {
    if a.vars()[var] != new && a.ring().index_of(new).is_some() {
        return Err(SuspensionError::NameCollision(new.to_string()));
    }
    let mut vars = a.vars().to_vec();
    vars[var] = new.to_string();
    Ok(PolyRing::new(a.field(), vars))
}

fn var_index(a: &PresentedAlgebra, var: &str) -> Result<usize, SuspensionError> {
    a.ring()
        .index_of(var)
        .ok_or_else(|| PolyError::UnknownVariable(var.to_string()).into())
}

/// Substitutes `var = new^e` in every relation; `new` takes the position
/// of `var`, so the monomial order is unchanged.
pub fn adjoin_root_substitution(
    a: &PresentedAlgebra,
    var: &str,
    new: &str,
    e: u32,
) -> Result<Arc<PresentedAlgebra>, SuspensionError> {
    if e == 0 {
        return Err(SuspensionError::ZeroExponent);
    }
    let i = var_index(a, var)?;
    let ring = renamed_ring(a, i, new)?;
    let bind = root_binding(var, new, e, &ring);
    let relations = a
        .relations()
        .iter()
        .map(|r| r.substitute(&bind, &ring))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PresentedAlgebra::with_order(&ring, relations, a.order().clone())?)
}

fn root_binding(var: &str, new: &str, e: u32, ring: &Arc<PolyRing>) -> BTreeMap<String, Polynomial> {
    let u = Polynomial::var_named(ring, new).expect("new variable is in the ring");
    BTreeMap::from([(var.to_string(), u.pow(e))])
}

/// Reverse rewrite `var^e = new`; every exponent of `var` in the relations
/// must be divisible by `e`.
pub fn collapse_root(
    a: &PresentedAlgebra,
    var: &str,
    new: &str,
    e: u32,
) -> Result<Arc<PresentedAlgebra>, SuspensionError> {
    if e == 0 {
        return Err(SuspensionError::ZeroExponent);
    }
    let i = var_index(a, var)?;
    let ring = renamed_ring(a, i, new)?;
    let relations = a
        .relations()
        .iter()
        .map(|r| r.collapse_power(var, e, new, &ring))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PresentedAlgebra::with_order(&ring, relations, a.order().clone())?)
}

/// Lifts an LND with `∂(var) = 0` to the algebra with `var = new^e`,
/// sending `new ↦ 0`. `e = 1` returns the input unchanged.
pub fn lift_lnd_through_root(
    d: &Derivation,
    cert: &LndCertificate,
    var: &str,
    new: &str,
    e: u32,
) -> Result<Lifted, SuspensionError> {
    require_certified(cert)?;
    let a = d.algebra();
    let i = var_index(a, var)?;
    if !d.image(i).is_zero() {
        return Err(SuspensionError::NotInKernel {
            var: var.to_string(),
            image: format_polynomial(d.image(i)),
        });
    }
    if e == 1 {
        return Ok(Lifted {
            algebra: a.clone(),
            derivation: d.clone(),
            certificate: d.certify_lnd(cert.cap),
        });
    }
    let target = adjoin_root_substitution(a, var, new, e)?;
    let bind = root_binding(var, new, e, target.ring());
    let images = d
        .images()
        .iter()
        .map(|p| p.substitute(&bind, target.ring()))
        .collect::<Result<Vec<_>, _>>()?;
    let derivation = Derivation::new(&target, images)?;
    let certificate = derivation.certify_lnd(cert.cap);
    Ok(Lifted {
        algebra: target,
        derivation,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Field;
    use crate::derivation::{Nu, DEFAULT_CAP};

    fn line() -> Arc<PresentedAlgebra> {
        PresentedAlgebra::parse(Field::Rational, &["x"], &[]).unwrap()
    }

    #[test]
    fn classical_suspension() {
        let x = line();
        let s = suspend(&x, &x.var(0), &[1, 1]).unwrap();
        assert_eq!(s.algebra.vars(), &["x", "y1", "y2"]);
        assert_eq!(s.algebra.relations()[0].to_string(), "y1*y2 - x");
        let t = torus_action(&s).unwrap();
        assert_eq!(t.matrix(), vec![vec![0, 1, -1]]);
    }

    #[test]
    fn trivial_suspension_is_base() {
        let x = PresentedAlgebra::parse(Field::Rational, &["a", "b"], &["a^2 - b^3"]).unwrap();
        let s = suspend(&x, &x.parse_poly("a + b").unwrap(), &[1]).unwrap();
        assert!(s.eliminated_matches_base().unwrap());
        assert_eq!(torus_action(&s).unwrap_err(), SuspensionError::EmptyTorus);
    }

    #[test]
    fn suspension_errors() {
        let x = line();
        let one = Polynomial::one(x.ring());
        assert!(matches!(suspend(&x, &one, &[1, 1]), Err(SuspensionError::ConstantFunction(_))));
        let names = vec!["x".to_string(), "v".to_string()];
        assert_eq!(
            suspend_named(&x, &x.var(0), &[1, 1], &names).unwrap_err(),
            SuspensionError::NameCollision("x".into())
        );
        assert_eq!(suspend(&x, &x.var(0), &[]).unwrap_err(), SuspensionError::NoExponents);
        // x is constant modulo x - 2
        let pt = PresentedAlgebra::parse(Field::Rational, &["x"], &["x - 2"]).unwrap();
        assert!(matches!(suspend(&pt, &pt.var(0), &[2]), Err(SuspensionError::ConstantFunction(_))));
    }

    #[test]
    fn criterion() {
        assert_eq!(gcd_criterion(&[2, 3]).unwrap().verdict, Verdict::RigidityPreserved);
        let r = gcd_criterion(&[4, 6]).unwrap();
        assert_eq!((r.d, r.verdict), (2, Verdict::CounterexamplePossible));
        assert_eq!(gcd_criterion(&[1]).unwrap().d, 1);
        assert_eq!(gcd_criterion(&[6, 4]).unwrap().d, 2);
    }

    #[test]
    fn torus_weights() {
        let x = line();
        let s = suspend(&x, &x.var(0), &[2, 3]).unwrap();
        assert_eq!(torus_action(&s).unwrap().matrix(), vec![vec![0, 3, -2]]);
        let s = suspend(&x, &x.var(0), &[2, 2]).unwrap();
        assert_eq!(torus_action(&s).unwrap().matrix(), vec![vec![0, 1, -1]]);
        let s = suspend(&x, &x.var(0), &[2, 3, 5]).unwrap();
        assert_eq!(
            torus_action(&s).unwrap().matrix(),
            vec![vec![0, 5, 0, -2], vec![0, 0, 5, -3]]
        );
    }

    #[test]
    fn lifting() {
        let x = PresentedAlgebra::parse(Field::Rational, &["a", "b"], &[]).unwrap();
        let d = Derivation::from_named(&x, &[("a", "0"), ("b", "a")]).unwrap();
        let cert = d.certify_lnd(DEFAULT_CAP);
        let s = suspend(&x, &x.var(0), &[2, 3]).unwrap();
        let l = lift_lnd(&d, &cert, &s).unwrap();
        assert!(l.certificate.is_certified());
        assert_eq!(l.certificate.order("b"), Some(Nu::Finite(1)));
        assert_eq!(l.certificate.order("y2"), Some(Nu::Finite(0)));

        let bad = suspend(&x, &x.var(1), &[2, 3]).unwrap();
        assert_eq!(lift_lnd(&d, &cert, &bad).unwrap_err(), SuspensionError::NotAnnihilated("a".into()));

        let zero = Derivation::zero(&x);
        let l = lift_lnd(&zero, &zero.certify_lnd(4), &bad).unwrap();
        assert!(l.derivation.is_zero());
    }

    #[test]
    fn root_substitution_round_trip() {
        let a = PresentedAlgebra::parse(Field::Rational, &["x", "y"], &["x^2 - y^3"]).unwrap();
        let b = adjoin_root_substitution(&a, "y", "u", 2).unwrap();
        assert_eq!(b.vars(), &["x", "u"]);
        assert_eq!(b.relations()[0].to_string(), "-u^6 + x^2");
        let c = collapse_root(&b, "u", "y", 2).unwrap();
        assert_eq!(c.relations(), a.relations());
        let err = collapse_root(&a, "y", "s", 2).unwrap_err();
        assert!(matches!(err, SuspensionError::Poly(PolyError::NotDivisible { monomial, .. }) if monomial == "y^3"));
    }

    #[test]
    fn lift_through_root() {
        let a = PresentedAlgebra::parse(Field::Rational, &["x", "y"], &[]).unwrap();
        let d = Derivation::from_named(&a, &[("x", "y^2"), ("y", "0")]).unwrap();
        let cert = d.certify_lnd(DEFAULT_CAP);
        let l = lift_lnd_through_root(&d, &cert, "y", "u", 3).unwrap();
        assert_eq!(l.derivation.image(0).to_string(), "u^6");
        assert_eq!(l.certificate.order("x"), cert.order("x"));
        let same = lift_lnd_through_root(&d, &cert, "y", "u", 1).unwrap();
        assert_eq!(same.algebra.vars(), a.vars());
        assert!(matches!(
            lift_lnd_through_root(&d, &cert, "x", "u", 2),
            Err(SuspensionError::NotInKernel { .. })
        ));
    }
}
