use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::poly::Monomial;

/// Monomial orders on exponent vectors, variables indexed from 0
/// (variable 0 is the largest under lex).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Lex,
    Grevlex,
    /// Block order: grevlex on `block` first, ties broken by `rest` on the
    /// whole exponent vector. An elimination order for the block variables.
    Elimination {
        block: Vec<usize>,
        rest: Box<MonomialOrder>,
    },
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::Grevlex
    }
}

fn grevlex_on<I>(a: &[u32], b: &[u32], idx: I) -> Ordering
where
    I: DoubleEndedIterator<Item = usize> + Clone,
{
    let da: u64 = idx.clone().map(|i| a[i] as u64).sum();
    let db: u64 = idx.clone().map(|i| b[i] as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in idx.rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            // smaller exponent in the last differing variable wins
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn elimination(block: Vec<usize>, rest: MonomialOrder) -> Self {
        let mut block = block;
        block.sort_unstable();
        block.dedup();
        MonomialOrder::Elimination {
            block,
            rest: Box::new(rest),
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.cmp_exponents(a.exponents(), b.exponents())
    }

    pub fn cmp_exponents(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grevlex => grevlex_on(a, b, 0..a.len()),
            MonomialOrder::Elimination { block, rest } => {
                match grevlex_on(a, b, block.iter().copied()) {
                    Ordering::Equal => rest.cmp_exponents(a, b),
                    o => o,
                }
            }
        }
    }

    /// Whether every polynomial whose leading monomial is free of `drop`
    /// lies entirely in the subring without `drop`.
    pub fn eliminates(&self, drop: &[usize]) -> bool {
        if drop.is_empty() {
            return true;
        }
        let mut d = drop.to_vec();
        d.sort_unstable();
        d.dedup();
        match self {
            MonomialOrder::Lex => d.iter().enumerate().all(|(i, &v)| i == v),
            MonomialOrder::Grevlex => false,
            MonomialOrder::Elimination { block, .. } => *block == d,
        }
    }

    /// The order induced on the subring after deleting the variables in
    /// `drop` (which `self` must eliminate); indices are renumbered.
    pub fn restrict(&self, drop: &[usize]) -> MonomialOrder {
        if drop.is_empty() {
            return self.clone();
        }
        match self {
            MonomialOrder::Lex => MonomialOrder::Lex,
            MonomialOrder::Grevlex => MonomialOrder::Grevlex,
            MonomialOrder::Elimination { rest, .. } => rest.renumber(drop),
        }
    }

    fn renumber(&self, drop: &[usize]) -> MonomialOrder {
        match self {
            MonomialOrder::Elimination { block, rest } => {
                let block: Vec<usize> = block
                    .iter()
                    .filter(|v| !drop.contains(v))
                    .map(|&v| v - drop.iter().filter(|&&d| d < v).count())
                    .collect();
                let rest = rest.renumber(drop);
                if block.is_empty() {
                    rest
                } else {
                    MonomialOrder::elimination(block, rest)
                }
            }
            other => other.clone(),
        }
    }

    /// Human-readable name with variable names resolved.
    pub fn describe(&self, vars: &[String]) -> String {
        match self {
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::Grevlex => "grevlex".into(),
            MonomialOrder::Elimination { block, rest } => {
                let names: Vec<&str> = block.iter().map(|&i| vars[i].as_str()).collect();
                format!("elim({}) > {}", names.join(","), rest.describe(vars))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn grevlex_basics() {
        let o = MonomialOrder::Grevlex;
        // x0*x2 < x1^2 in grevlex
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[2, 0, 0]), &m(&[0, 0, 1])), Ordering::Greater);
        assert_eq!(MonomialOrder::Lex.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Greater);
    }

    #[test]
    fn elimination_block_dominates() {
        let o = MonomialOrder::elimination(vec![2], MonomialOrder::Grevlex);
        assert_eq!(o.cmp(&m(&[0, 0, 1]), &m(&[5, 5, 0])), Ordering::Greater);
        assert!(o.eliminates(&[2]));
        assert!(!o.eliminates(&[1]));
        assert!(MonomialOrder::Lex.eliminates(&[0, 1]));
        assert!(!MonomialOrder::Lex.eliminates(&[1]));
        assert!(!MonomialOrder::Grevlex.eliminates(&[0]));
    }

    #[test]
    fn restrict_renumbers_nested_blocks() {
        let inner = MonomialOrder::elimination(vec![3], MonomialOrder::Grevlex);
        let o = MonomialOrder::elimination(vec![1], inner);
        assert_eq!(
            o.restrict(&[1]),
            MonomialOrder::elimination(vec![2], MonomialOrder::Grevlex)
        );
    }
}
