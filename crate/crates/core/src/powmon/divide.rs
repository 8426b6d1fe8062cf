use super::finset::{sumset, FinSet};
use crate::budget::Budget;
use crate::element::Element;
use crate::error::Result;
use crate::monoid::Monoid;

/// `C = {m ∈ M : S + {m} ⊆ T}`, or `None` when it is empty. Every `m`
/// has the form `t − min S`.
pub fn singleton_candidates<M: Monoid>(
    s: &FinSet<M::Elem>,
    t: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<Option<FinSet<M::Elem>>> {
    let mut out = Vec::new();
    if s.len() > t.len() {
        return Ok(None);
    }
    for x in t.iter() {
        let m = x.sub(s.min());
        if m < M::Elem::zero() {
            continue;
        }
        budget.tick()?;
        if s.iter().all(|e| t.contains(&e.add(&m))) && monoid.member(&m, budget)? {
            out.push(m);
        }
    }
    Ok((!out.is_empty()).then(|| FinSet::from_sorted(out)))
}

/// A set `D` with `S + D = T`, if one exists. The returned witness is the
/// largest one: every witness is contained in the candidate set, so one
/// exists exactly when the candidate set itself works.
pub fn divides_in_p<M: Monoid>(
    s: &FinSet<M::Elem>,
    t: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<Option<FinSet<M::Elem>>> {
    let Some(c) = singleton_candidates(s, t, monoid, budget)? else {
        return Ok(None);
    };
    budget.charge((s.len() * c.len()) as u64)?;
    Ok((sumset(s, &c) == *t).then_some(c))
}
