use std::fmt;

use crate::budget::Budget;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::monoid::Monoid;
use crate::powmon::FinSet;

/// `⋂_{s ∈ S} divisors(s)`, sorted.
pub fn common_divisors<M: Monoid>(
    s: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<Vec<M::Elem>> {
    let mut out = Vec::new();
    for d in monoid.divisors(s.min(), budget)? {
        if is_common_divisor(&d, s, monoid, budget)? {
            out.push(d);
        }
    }
    Ok(out)
}

pub fn is_common_divisor<M: Monoid>(
    d: &M::Elem,
    s: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<bool> {
    for x in s.iter() {
        if !monoid.divides(d, x, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An atom `a` with `d + a` still a common divisor of `S`, if any. In an
/// atomic monoid `d` is an MCD of `S` exactly when there is none.
pub fn extending_atom<M: Monoid>(
    d: &M::Elem,
    s: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<Option<M::Elem>> {
    for a in monoid.atoms() {
        if is_common_divisor(&d.add(a), s, monoid, budget)? {
            return Ok(Some(a.clone()));
        }
    }
    Ok(None)
}

/// All maximal common divisors of `S`: common divisors `d` for which
/// `{s − d}` has no nonzero common divisor.
pub fn mcd<M: Monoid>(
    s: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<Vec<M::Elem>> {
    let cd = common_divisors(s, monoid, budget)?;
    let mut out = Vec::new();
    for d in &cd {
        budget.charge(monoid.atoms().len() as u64)?;
        if monoid
            .atoms()
            .iter()
            .all(|a| cd.binary_search(&d.add(a)).is_err())
        {
            out.push(d.clone());
        }
    }
    Ok(out)
}

/// One MCD of `S`, reached by adding the smallest extending atom until
/// none is left. Terminates in finitely generated monoids.
pub fn find_mcd<M: Monoid>(
    s: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<M::Elem> {
    let mut d = M::Elem::zero();
    while let Some(a) = extending_atom(&d, s, monoid, budget)? {
        d = d.add(&a);
    }
    Ok(d)
}

/// Outcome of an MCD-existence sweep.
#[derive(Clone, PartialEq, Eq)]
pub enum McdVerdict<E> {
    /// Every sampled set has an MCD (within the truncation, if any).
    Holds { sets_checked: usize },
    /// The truncation's MCD of `set` stops being maximal once `refuting_atom`
    /// from a deeper truncation is available.
    TruncationInconclusive {
        set: FinSet<E>,
        candidate: E,
        refuting_atom: E,
        refine_depth: u32,
    },
}

impl<E: Element> fmt::Display for McdVerdict<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McdVerdict::Holds { sets_checked } => write!(f, "holds on {sets_checked} sets"),
            McdVerdict::TruncationInconclusive {
                set,
                candidate,
                refuting_atom,
                refine_depth,
            } => write!(
                f,
                "no MCD found within truncation for {set}: candidate {candidate} extends by {refuting_atom} at depth {refine_depth}"
            ),
        }
    }
}

impl<E: Element> fmt::Debug for McdVerdict<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Nonempty subsets of `pool` with at most `k` elements, in a fixed order.
pub fn subsets_up_to<E: Element>(pool: &[E], k: usize) -> Vec<FinSet<E>> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<E>)> = vec![(0, Vec::new())];
    while let Some((start, cur)) = stack.pop() {
        if !cur.is_empty() {
            out.push(FinSet::from_sorted(cur.clone()));
        }
        if cur.len() == k {
            continue;
        }
        for i in (start..pool.len()).rev() {
            let mut next = cur.clone();
            next.push(pool[i].clone());
            stack.push((i + 1, next));
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Whether every subset of `M ∩ [0, bound]` with at most `k` elements has
/// an MCD. For truncations the answer holds within the truncation only.
pub fn is_mcd_monoid_sample<M: Monoid>(
    monoid: &M,
    k: usize,
    bound: &M::Elem,
    budget: &mut Budget,
) -> Result<McdVerdict<M::Elem>> {
    if k == 0 {
        return Err(Error::invalid("cardinality bound must be at least 1"));
    }
    let pool = monoid.members_below(bound, budget)?;
    let sets = subsets_up_to(&pool, k);
    for s in &sets {
        find_mcd(s, monoid, budget)?;
    }
    Ok(McdVerdict::Holds {
        sets_checked: sets.len(),
    })
}

/// Finds an MCD of each set in `monoid`, then checks it against the deeper
/// truncations in `deeper` (paired with their depth). A candidate that a
/// deeper atom extends is reported as truncation-inconclusive.
pub fn mcd_sample_sets<M: Monoid>(
    monoid: &M,
    sets: &[FinSet<M::Elem>],
    deeper: &[(u32, &M)],
    budget: &mut Budget,
) -> Result<McdVerdict<M::Elem>> {
    for s in sets {
        let d = find_mcd(s, monoid, budget)?;
        for &(depth, m) in deeper {
            if let Some(a) = extending_atom(&d, s, m, budget)? {
                return Ok(McdVerdict::TruncationInconclusive {
                    set: s.clone(),
                    candidate: d,
                    refuting_atom: a,
                    refine_depth: depth,
                });
            }
        }
    }
    Ok(McdVerdict::Holds {
        sets_checked: sets.len(),
    })
}
