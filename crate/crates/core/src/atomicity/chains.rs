use std::fmt;

use crate::budget::Budget;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::monoid::Monoid;
use crate::powmon::{p_factorize, sum_all, FinSet};

/// A strictly descending divisibility chain `b_0, b_1, …` with each
/// `b_{i+1}` a proper divisor of `b_i`.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainReport<T> {
    pub start: T,
    pub chain: Vec<T>,
    /// True when the last link has no proper divisor left.
    pub stabilized: bool,
}

impl<T> ChainReport<T> {
    /// Number of proper steps.
    pub fn length(&self) -> usize {
        self.chain.len().saturating_sub(1)
    }
}

impl<T: fmt::Display> fmt::Display for ChainReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.chain.iter().enumerate() {
            if i > 0 {
                f.write_str(" -> ")?;
            }
            write!(f, "{b}")?;
        }
        if !self.stabilized {
            f.write_str(" -> ...")?;
        }
        Ok(())
    }
}

impl<T: fmt::Display> fmt::Debug for ChainReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A longest chain from `b`: peel the atoms of a longest factorization
/// one at a time, largest first. Cut off after `maxlen` steps.
pub fn accp_chain_explore<M: Monoid>(
    b: &M::Elem,
    monoid: &M,
    maxlen: usize,
    budget: &mut Budget,
) -> Result<ChainReport<M::Elem>> {
    let zs = monoid.factorizations(b, budget)?;
    let longest = zs
        .iter()
        .max_by(|x, y| x.length().cmp(&y.length()).then_with(|| y.cmp(x)))
        .ok_or_else(|| Error::invalid(format!("{b} is not in the monoid")))?;
    let mut atoms = longest.atoms_flat();
    atoms.reverse();
    let mut chain = vec![b.clone()];
    let mut cur = b.clone();
    for a in atoms.iter().take(maxlen) {
        cur = cur.sub(a);
        chain.push(cur.clone());
    }
    Ok(ChainReport {
        start: b.clone(),
        stabilized: atoms.len() <= maxlen,
        chain,
    })
}

/// A chain in the power monoid from `S`, peeling the parts of a
/// p-factorization one at a time.
pub fn p_accp_chain_explore<M: Monoid>(
    s: &FinSet<M::Elem>,
    monoid: &M,
    maxlen: usize,
    budget: &mut Budget,
) -> Result<ChainReport<FinSet<M::Elem>>> {
    let parts = p_factorize(s, monoid, budget)?;
    let mut chain = vec![s.clone()];
    for i in 1..=parts.len().min(maxlen) {
        chain.push(sum_all(&parts[i..]));
    }
    Ok(ChainReport {
        start: s.clone(),
        stabilized: parts.len() <= maxlen,
        chain,
    })
}

/// Cardinalities along a chain of sets.
pub fn cardinality_profile<E: Element>(chain: &ChainReport<FinSet<E>>) -> Vec<usize> {
    chain.chain.iter().map(FinSet::len).collect()
}
