//! The cyclotomic family: `F = ∏_{i=1}^{p} L_i` with
//! `L_i = Σ_j ε_i^j x_j y^j`, the algebras
//! `Y_p = {F = z², yw = 1}` and `X_p = {G = z², s w^p = 1}` with
//! `F(x, y) = G(x, y^p)`, and the locally nilpotent derivation of `Y_p`
//! obtained from the Vandermonde system in the `ε_i`.
//!
//! Roots are enumerated as `ε_i = ζ^i`, so `ε_1 = ζ` is primitive and
//! `ε_p = 1`.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Grading, PresentedAlgebra};
use crate::coeff::{is_prime, root_of_unity, CyclotomicNumber, Field, Rational};
use crate::derivation::{Derivation, DerivationCertificate, DerivationError, LndCertificate};
use crate::groebner::MonomialOrder;
use crate::parse_io::{format_images, AlgebraFile, NamedMap};
use crate::poly::{Coeff, Monomial, PolyError, PolyRing, Polynomial};
use crate::suspension::{adjoin_root_substitution, lift_lnd_through_root, SuspensionError};

pub const MAX_P_ENV: &str = "SUSPENSIA_MAX_P";
pub const DEFAULT_MAX_P: u32 = 7;

pub fn root_enumeration(p: u32) -> String {
    format!("e_i = z@{p}^i for i = 1..{p}; e_1 primitive, e_{p} = 1")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("p = {p} outside the supported range 3..={max} (set {MAX_P_ENV} to raise the ceiling)")]
    PrimeOutOfRange { p: u32, max: u32 },
    #[error("p = {p} does not divide n = {n}")]
    NotDivisor { p: u32, n: u32 },
    #[error("k must be positive")]
    ZeroK,
    #[error("internal check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Suspension(#[from] SuspensionError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), ConstructionError> {
    if cond {
        Ok(())
    } else {
        Err(ConstructionError::Check(what()))
    }
}

/// Prime ceiling, from `SUSPENSIA_MAX_P` if set to a number.
pub fn max_prime() -> u32 {
    std::env::var(MAX_P_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_P)
}

pub fn check_prime(p: u32) -> Result<(), ConstructionError> {
    if !is_prime(p) {
        return Err(ConstructionError::NotPrime(p));
    }
    let max = max_prime();
    if p < 3 || p > max {
        return Err(ConstructionError::PrimeOutOfRange { p, max });
    }
    Ok(())
}

pub fn yp_vars(p: u32) -> Vec<String> {
    let mut v: Vec<String> = (0..p).map(|j| format!("x{j}")).collect();
    v.extend(["y", "z", "w"].map(String::from));
    v
}

pub fn xp_vars(p: u32) -> Vec<String> {
    let mut v: Vec<String> = (0..p).map(|j| format!("x{j}")).collect();
    v.extend(["s", "z", "w"].map(String::from));
    v
}

/// Orders for the constructed algebras: `z` first, then grevlex. Both
/// relations then have coprime leading terms `z²` and `yw` (or `s w^p`).
pub fn construction_order(p: u32) -> MonomialOrder {
    MonomialOrder::elimination(vec![p as usize + 1], MonomialOrder::Grevlex)
}

#[derive(Debug, Clone)]
pub struct LinearForms {
    pub p: u32,
    pub ring: Arc<PolyRing>,
    /// `L_1..L_p`.
    pub forms: Vec<Polynomial>,
}

impl LinearForms {
    pub fn form(&self, i: u32) -> &Polynomial {
        &self.forms[i as usize - 1]
    }

    pub fn product(&self) -> Polynomial {
        self.forms
            .iter()
            .fold(Polynomial::one(&self.ring), |acc, l| &acc * l)
    }
}

fn eps(p: u32, i: i64) -> Coeff {
    let r = i.rem_euclid(p as i64) as u32;
    root_of_unity(p, if r == 0 { p } else { r }).expect("p is prime")
}

pub fn linear_forms(p: u32) -> Result<LinearForms, ConstructionError> {
    check_prime(p)?;
    let ring = PolyRing::new(Field::cyclotomic(p).expect("prime"), yp_vars(p));
    let n = ring.nvars();
    let y = p as usize;
    let forms = (1..=p)
        .map(|i| {
            Polynomial::from_terms(
                &ring,
                (0..p as usize).map(|j| {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    e[y] = j as u32;
                    (Monomial::new(e), eps(p, i as i64 * j as i64))
                }),
            )
        })
        .collect();
    Ok(LinearForms { p, ring, forms })
}

#[derive(Debug, Clone)]
pub struct FPair {
    pub p: u32,
    /// In the ring of `Y_p` (over `Q(ζ_p)`, rational coefficients).
    pub f: Polynomial,
    /// In the ring of `X_p` (over Q).
    pub g: Polynomial,
}

/// Expands `F`, checks that it descends to Q and that every `y`-exponent
/// is a multiple of `p`, then collapses `y^p = s`.
pub fn build_f(p: u32) -> Result<FPair, ConstructionError> {
    let lf = linear_forms(p)?;
    let f = lf.product();
    check(f.terms().all(|(_, c)| c.is_rational()), || "F has an irrational coefficient".into())?;
    let y = p as usize;
    check(f.terms().all(|(m, _)| m.exponents()[y] % p == 0), || {
        "F has a y-exponent not divisible by p".into()
    })?;
    let xring = PolyRing::new(Field::Rational, xp_vars(p));
    let g = f.collapse_power("y", p, "s", &xring)?;
    let g = Polynomial::from_terms(&xring, g.terms().map(|(m, c)| (m.clone(), rational(c))));
    Ok(FPair { p, f, g })
}

fn rational(c: &Coeff) -> Coeff {
    CyclotomicNumber::from_rational(c.as_rational().expect("checked rational").clone())
}

fn var(ring: &Arc<PolyRing>, name: &str) -> Polynomial {
    Polynomial::var_named(ring, name).expect("construction variable")
}

pub fn build_yp(p: u32) -> Result<Arc<PresentedAlgebra>, ConstructionError> {
    let fp = build_f(p)?;
    let ring = fp.f.ring().clone();
    let z = var(&ring, "z");
    let rels = vec![
        &fp.f - &z.pow(2),
        &(&var(&ring, "y") * &var(&ring, "w")) - &Polynomial::one(&ring),
    ];
    Ok(PresentedAlgebra::with_order(&ring, rels, construction_order(p))?)
}

pub fn xp_grading_matrix(p: u32) -> Vec<Vec<i64>> {
    let mut row = vec![2; p as usize];
    row.extend([0, p as i64, 0]);
    vec![row]
}

/// `X_p` with the grading `x_i ↦ 2, z ↦ p, s, w ↦ 0`.
pub fn build_xp(p: u32) -> Result<(Arc<PresentedAlgebra>, Grading), ConstructionError> {
    let fp = build_f(p)?;
    let ring = fp.g.ring().clone();
    let rels = vec![
        &fp.g - &var(&ring, "z").pow(2),
        &(&var(&ring, "s") * &var(&ring, "w").pow(p)) - &Polynomial::one(&ring),
    ];
    let x = PresentedAlgebra::with_order(&ring, rels, construction_order(p))?;
    let g = x.attach_grading(xp_grading_matrix(p))?;
    Ok((x, g))
}

/// The same weights on `Y_p`, with `y` in place of `s`.
pub fn yp_grading(yp: &Arc<PresentedAlgebra>, p: u32) -> Result<Grading, ConstructionError> {
    Ok(yp.attach_grading(xp_grading_matrix(p))?)
}

/// Gauss–Jordan inverse; `None` if singular.
pub fn invert_matrix(m: &[Vec<Coeff>]) -> Option<Vec<Vec<Coeff>>> {
    let n = m.len();
    let field = m.first()?.first()?.field();
    let mut a: Vec<Vec<Coeff>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].inverse().ok()?;
        a[c] = a[c].iter().map(|x| x * &inv).collect();
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                a[r] = a[r].iter().zip(&a[c]).map(|(x, y)| x - &(&f * y)).collect();
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn vandermonde(p: u32) -> Vec<Vec<Coeff>> {
    (1..=p as i64)
        .map(|i| (0..p as i64).map(|j| eps(p, i * j)).collect())
        .collect()
}

/// How `c_j / y^j` was made polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum YPowerBranch {
    /// The `y`-power in `c_j` was at least `j`.
    Direct,
    /// Missing powers of `y` replaced by powers of `w`.
    UnitWitness,
}

#[derive(Debug, Clone)]
pub struct VandermondeLnd {
    pub p: u32,
    pub algebra: Arc<PresentedAlgebra>,
    pub derivation: Derivation,
    /// First column of `V^{-1}`: `∂(x_j) y^j = 2 z y^{p−1} · column[j]`.
    pub column: Vec<Coeff>,
    pub branches: Vec<YPowerBranch>,
}

fn divide_by_y(f: &Polynomial, j: u32, y: usize, w: usize) -> (Polynomial, YPowerBranch) {
    let mut branch = YPowerBranch::Direct;
    let out = Polynomial::from_terms(
        f.ring(),
        f.terms().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            if e[y] >= j {
                e[y] -= j;
            } else {
                branch = YPowerBranch::UnitWitness;
                e[w] += j - e[y];
                e[y] = 0;
            }
            (Monomial::new(e), c.clone())
        }),
    );
    (out, branch)
}

/// Solves `Σ_j ε_i^j y^j ∂(x_j) = 2 z y^{p−1} δ_{i1}`, so that `∂L_1 = 2zy^{p−1}`
/// and `∂L_i = 0` for `i ≥ 2`, and sets `∂(z) = y^{p−1} ∏_{i≥2} L_i`,
/// `∂(y) = ∂(w) = 0`.
pub fn build_vandermonde_lnd(p: u32) -> Result<VandermondeLnd, ConstructionError> {
    let yp = build_yp(p)?;
    let lf = linear_forms(p)?;
    let ring = yp.ring().clone();
    let (yi, zi, wi) = (p as usize, p as usize + 1, p as usize + 2);
    let inv = invert_matrix(&vandermonde(p)).ok_or_else(|| ConstructionError::Check("Vandermonde matrix is singular".into()))?;
    let column: Vec<Coeff> = inv.iter().map(|row| row[0].clone()).collect();
    let y = var(&ring, "y");
    let rhs = &(&var(&ring, "z") * &y.pow(p - 1)).scale(&Field::Rational.from_int(2));
    let mut images = vec![Polynomial::zero(&ring); ring.nvars()];
    let mut branches = Vec::with_capacity(p as usize);
    for j in 0..p as usize {
        let (img, branch) = divide_by_y(&rhs.scale(&column[j]), j as u32, yi, wi);
        images[j] = img;
        branches.push(branch);
    }
    check(branches.iter().all(|b| *b == YPowerBranch::Direct), || {
        "expected non-negative y-powers in every image".into()
    })?;
    images[zi] = (2..=p).fold(y.pow(p - 1), |acc, i| &acc * lf.form(i));
    let derivation = Derivation::new(&yp, images)?;
    check(derivation.well_defined().iter().all(|c| c.raw_image_zero), || {
        "relation images are not identically zero".into()
    })?;
    Ok(VandermondeLnd {
        p,
        algebra: yp,
        derivation,
        column,
        branches,
    })
}

/// `x_j y^j = (1/p) Σ_i ε_i^{−j} L_i` for every `j`.
pub fn inverse_vandermonde_identity(p: u32) -> Result<bool, ConstructionError> {
    let lf = linear_forms(p)?;
    let ring = &lf.ring;
    let inv_p = Rational::new(BigInt::from(1), BigInt::from(p));
    Ok((0..p).all(|j| {
        let lhs = &var(ring, &format!("x{j}")) * &var(ring, "y").pow(j);
        let rhs = (1..=p).fold(Polynomial::zero(ring), |acc, i| {
            &acc + &lf.form(i).scale(&eps(p, -(i as i64) * j as i64).scale(&inv_p))
        });
        lhs == rhs
    }))
}

/// `X = {x² + y²s³ + z³ = 0}` and `Y = {x² + y²u^{6k} + z³ = 0}`, the latter
/// obtained by `s = u^{2k}`.
pub fn build_fmj_pair(k: u32) -> Result<(Arc<PresentedAlgebra>, Arc<PresentedAlgebra>), ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::ZeroK);
    }
    let x = PresentedAlgebra::parse(Field::Rational, &["x", "y", "s", "z"], &["x^2 + y^2*s^3 + z^3"])?;
    let y = adjoin_root_substitution(&x, "s", "u", 2 * k)?;
    let expected = y.parse_poly(&format!("x^2 + y^2*u^{} + z^3", 6 * k)).map_err(AlgebraError::from)?;
    check(y.relations()[0] == expected, || "root substitution gave an unexpected relation".into())?;
    Ok((x, y))
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LiftReport {
    pub root: String,
    pub algebra: AlgebraFile,
    pub images: NamedMap<String>,
    pub certificate: DerivationCertificate,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BundleReport {
    pub p: u32,
    pub n: u32,
    pub root_enumeration: String,
    pub f: String,
    pub g: String,
    pub f_rational: bool,
    pub y_degrees_divisible: bool,
    pub product_of_linear_forms: bool,
    pub inverse_vandermonde_identity: bool,
    pub xp_relation_degrees: Vec<Vec<i64>>,
    pub y_power_branches: Vec<YPowerBranch>,
    pub vandermonde: DerivationCertificate,
    pub extreme_components_certified: bool,
    pub lift: LiftReport,
    pub certified: bool,
}

#[derive(Debug, Clone)]
pub struct YpBundle {
    pub p: u32,
    pub n: u32,
    pub f: FPair,
    pub yp: Arc<PresentedAlgebra>,
    pub yp_grading: Grading,
    pub xp: Arc<PresentedAlgebra>,
    pub xp_grading: Grading,
    pub lnd: VandermondeLnd,
    pub lnd_certificate: LndCertificate,
    pub lifted_algebra: Arc<PresentedAlgebra>,
    pub lifted: Derivation,
    pub lifted_certificate: LndCertificate,
    pub report: BundleReport,
}

pub fn certify_bundle(p: u32, n: u32, cap: u32) -> Result<YpBundle, ConstructionError> {
    check_prime(p)?;
    if n == 0 || n % p != 0 {
        return Err(ConstructionError::NotDivisor { p, n });
    }
    let f = build_f(p)?;
    let lf = linear_forms(p)?;
    let product_of_linear_forms = lf.product() == f.f;
    let (xp, xp_grading) = build_xp(p)?;
    let lnd = build_vandermonde_lnd(p)?;
    let yp = lnd.algebra.clone();
    let yp_grading = yp_grading(&yp, p)?;
    let d = &lnd.derivation;
    let lnd_certificate = d.certify_lnd(cap);

    let dec = d.decompose(&yp_grading, 0)?;
    let extreme_components_certified = [dec.lowest(), dec.highest()]
        .into_iter()
        .all(|c| c.is_some_and(|c| c.certify_lnd(cap).is_certified()));

    let e = n / p;
    let lifted = if lnd_certificate.is_certified() {
        lift_lnd_through_root(d, &lnd_certificate, "y", "u", e)?
    } else {
        return Err(DerivationError::NotCertified(cap).into());
    };
    let root = if e == 1 { "identity".to_string() } else { format!("y = u^{e}") };
    let lift = LiftReport {
        root,
        algebra: AlgebraFile::from_algebra(&lifted.algebra),
        images: format_images(&lifted.derivation),
        certificate: lifted.derivation.certificate(cap, None),
    };
    let vandermonde = d.certificate(cap, Some(&yp_grading));
    let inverse_identity = inverse_vandermonde_identity(p)?;
    let certified = product_of_linear_forms
        && inverse_identity
        && vandermonde.lnd.is_certified()
        && extreme_components_certified
        && lift.certificate.lnd.is_certified();
    let report = BundleReport {
        p,
        n,
        root_enumeration: root_enumeration(p),
        f: f.f.to_string(),
        g: f.g.to_string(),
        f_rational: true,
        y_degrees_divisible: true,
        product_of_linear_forms,
        inverse_vandermonde_identity: inverse_identity,
        xp_relation_degrees: xp_grading.relation_degrees(),
        y_power_branches: lnd.branches.clone(),
        vandermonde,
        extreme_components_certified,
        lift,
        certified,
    };
    Ok(YpBundle {
        p,
        n,
        f,
        yp,
        yp_grading,
        xp,
        xp_grading,
        lnd,
        lnd_certificate,
        lifted_algebra: lifted.algebra,
        lifted: lifted.derivation,
        lifted_certificate: lifted.certificate,
        report,
    })
}
