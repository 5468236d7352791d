//! Buchberger's algorithm, normal forms and elimination.

mod order;

pub use order::MonomialOrder;

use std::sync::Arc;

use thiserror::Error;

use crate::poly::{Coeff, Monomial, PolyRing, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("order `{order}` is not an elimination order for {{{vars}}}")]
    NotEliminationOrder { order: String, vars: String },
    #[error("generators live in different rings")]
    ContextMismatch,
}

/// A basis together with the order it is a Gröbner basis for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    order: MonomialOrder,
    generators: Vec<Polynomial>,
    reduced: bool,
}

struct Lead {
    mono: Monomial,
    coeff: Coeff,
}

fn lead(f: &Polynomial, order: &MonomialOrder) -> Option<Lead> {
    f.leading_term(order).map(|(m, c)| Lead {
        mono: m.clone(),
        coeff: c.clone(),
    })
}

/// Full reduction of `f` by `basis`; returns the remainder.
fn reduce(f: &Polynomial, basis: &[(Monomial, Coeff, &Polynomial)], order: &MonomialOrder) -> Polynomial {
    let mut work = f.clone();
    let mut rem = Polynomial::zero(f.ring());
    while let Some(Lead { mono, coeff }) = lead(&work, order) {
        match basis.iter().find(|(lm, _, _)| lm.divides(&mono)) {
            Some((lm, lc, g)) => {
                let q = lm.quotient_of(&mono).expect("divisibility checked");
                let c = -&(&coeff / lc);
                work.add_scaled(g, &q, &c);
            }
            None => {
                work.remove_term(&mono);
                rem.add_term(mono, coeff);
            }
        }
    }
    rem
}

fn leads<'a>(gens: &'a [Polynomial], order: &MonomialOrder) -> Vec<(Monomial, Coeff, &'a Polynomial)> {
    gens.iter()
        .filter_map(|g| lead(g, order).map(|l| (l.mono, l.coeff, g)))
        .collect()
}

pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (Some(lf), Some(lg)) = (lead(f, order), lead(g, order)) else {
        return Polynomial::zero(f.ring());
    };
    let l = lf.mono.lcm(&lg.mono);
    let mf = lf.mono.quotient_of(&l).expect("lcm");
    let mg = lg.mono.quotient_of(&l).expect("lcm");
    let a = f.mul_term(&mf, &lf.coeff.inverse().expect("nonzero"));
    let b = g.mul_term(&mg, &lg.coeff.inverse().expect("nonzero"));
    &a - &b
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Pairs are processed smallest-lcm first; the coprime-leading-monomial
/// and chain criteria prune pairs.
pub fn buchberger(ring: &Arc<PolyRing>, gens: &[Polynomial], order: &MonomialOrder) -> Result<GroebnerBasis, GroebnerError> {
    if gens.iter().any(|g| !Arc::ptr_eq(g.ring(), ring) && **g.ring() != **ring) {
        return Err(GroebnerError::ContextMismatch);
    }
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut lms: Vec<Monomial> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        if g.is_constant() {
            return Ok(GroebnerBasis::unit(ring, order));
        }
        let g = g.monic(order);
        lms.push(lead(&g, order).expect("nonzero").mono);
        basis.push(g);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut done: std::collections::HashSet<(usize, usize)> = Default::default();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    loop {
        // smallest lcm first; ties by index for determinism
        let Some(pos) = (0..pairs.len()).min_by(|&a, &b| {
            let la = lms[pairs[a].0].lcm(&lms[pairs[a].1]);
            let lb = lms[pairs[b].0].lcm(&lms[pairs[b].1]);
            order.cmp(&la, &lb).then(pairs[a].cmp(&pairs[b]))
        }) else {
            break;
        };
        let (i, j) = pairs.swap_remove(pos);
        done.insert((i, j));
        if lms[i].coprime(&lms[j]) {
            continue;
        }
        let l = lms[i].lcm(&lms[j]);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lms[k].divides(&l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = reduce(&s, &leads(&basis, order), order);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(GroebnerBasis::unit(ring, order));
        }
        let r = r.monic(order);
        let n = basis.len();
        lms.push(lead(&r, order).expect("nonzero").mono);
        basis.push(r);
        for k in 0..n {
            pairs.push((k, n));
        }
    }
    Ok(GroebnerBasis::interreduce(ring, basis, order))
}

impl GroebnerBasis {
    fn unit(ring: &Arc<PolyRing>, order: &MonomialOrder) -> Self {
        GroebnerBasis {
            ring: ring.clone(),
            order: order.clone(),
            generators: vec![Polynomial::one(ring)],
            reduced: true,
        }
    }

    /// Minimizes and tail-reduces a Gröbner basis.
    fn interreduce(ring: &Arc<PolyRing>, basis: Vec<Polynomial>, order: &MonomialOrder) -> Self {
        let mut items: Vec<(Monomial, Polynomial)> = basis
            .into_iter()
            .map(|g| (lead(&g, order).expect("nonzero").mono, g))
            .collect();
        items.sort_by(|a, b| order.cmp(&a.0, &b.0));
        let mut minimal: Vec<(Monomial, Polynomial)> = Vec::new();
        for (m, g) in items {
            if !minimal.iter().any(|(n, _)| n.divides(&m)) {
                minimal.push((m, g));
            }
        }
        let polys: Vec<Polynomial> = minimal.iter().map(|(_, g)| g.clone()).collect();
        let mut out = Vec::with_capacity(polys.len());
        for (idx, g) in polys.iter().enumerate() {
            let others: Vec<Polynomial> = polys
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != idx)
                .map(|(_, h)| h.clone())
                .collect();
            let r = reduce(g, &leads(&others, order), order).monic(order);
            out.push(r);
        }
        GroebnerBasis {
            ring: ring.clone(),
            order: order.clone(),
            generators: out,
            reduced: true,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.generators.iter().any(|g| g.is_constant() && !g.is_zero())
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .filter_map(|g| lead(g, &self.order).map(|l| l.mono))
            .collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        reduce(f, &leads(&self.generators, &self.order), &self.order)
    }

    pub fn is_member(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Post-hoc Buchberger criterion: every S-polynomial reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|j| (0..j).all(|i| self.is_member(&s_polynomial(&g[i], &g[j], &self.order))))
    }

    /// Generators of `I ∩ K[vars without drop]`, expressed in the subring.
    pub fn eliminate(&self, drop: &[usize]) -> Result<GroebnerBasis, GroebnerError> {
        if drop.is_empty() {
            return Ok(self.clone());
        }
        if !self.order.eliminates(drop) {
            let vars = drop
                .iter()
                .map(|&i| self.ring.vars()[i].as_str())
                .collect::<Vec<_>>()
                .join(",");
            return Err(GroebnerError::NotEliminationOrder {
                order: self.order.describe(self.ring.vars()),
                vars,
            });
        }
        let kept: Vec<String> = self
            .ring
            .vars()
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, v)| v.clone())
            .collect();
        let sub = PolyRing::new(self.ring.field(), kept);
        let generators = self
            .generators
            .iter()
            .filter(|g| drop.iter().all(|&d| g.degree_in(d).unwrap_or(0) == 0))
            .map(|g| g.embed(&sub).expect("free of dropped variables"))
            .collect();
        Ok(GroebnerBasis {
            ring: sub,
            order: self.order.restrict(drop),
            generators,
            reduced: self.reduced,
        })
    }
}
