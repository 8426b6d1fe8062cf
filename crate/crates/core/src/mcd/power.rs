use std::collections::BTreeSet;

use super::common::mcd;
use crate::budget::Budget;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::monoid::Monoid;
use crate::powmon::{divides_in_p, p_divisors, sumset, FinSet};

/// Common divisors of a family in the power monoid, sorted.
pub fn p_common_divisors<M: Monoid>(
    family: &[FinSet<M::Elem>],
    monoid: &M,
    budget: &mut Budget,
) -> Result<Vec<FinSet<M::Elem>>> {
    let Some(first) = family.first() else {
        return Err(Error::invalid("the family must be nonempty"));
    };
    let mut out = Vec::new();
    for d in p_divisors(first, monoid, budget)? {
        let mut all = true;
        for t in &family[1..] {
            if divides_in_p(&d, t, monoid, budget)?.is_none() {
                all = false;
                break;
            }
        }
        if all {
            out.push(d);
        }
    }
    Ok(out)
}

fn dedup_family<E: Element>(family: &[FinSet<E>]) -> Vec<FinSet<E>> {
    family
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// All MCDs of a family of sets in the power monoid: common divisors `D`
/// such that `D + D'` is a common divisor only for `D' = {0}`. The power
/// monoid is not cancellative, so this is checked against every other
/// common divisor rather than through quotients.
pub fn mcd_in_p<M: Monoid>(
    family: &[FinSet<M::Elem>],
    monoid: &M,
    budget: &mut Budget,
) -> Result<Vec<FinSet<M::Elem>>> {
    let common = p_common_divisors(&dedup_family(family), monoid, budget)?;
    let mut out = Vec::new();
    for d in &common {
        let mut maximal = true;
        for e in &common {
            if e != d && divides_in_p(d, e, monoid, budget)?.is_some() {
                maximal = false;
                break;
            }
        }
        if maximal {
            out.push(d.clone());
        }
    }
    Ok(out)
}

/// One MCD of a family, built the constructive way: peel off a
/// non-singleton common divisor while one exists, then lift an MCD of the
/// union of what is left.
pub fn constructive_mcd_in_p<M: Monoid>(
    family: &[FinSet<M::Elem>],
    monoid: &M,
    budget: &mut Budget,
) -> Result<FinSet<M::Elem>> {
    let family = dedup_family(family);
    let common = p_common_divisors(&family, monoid, budget)?;
    let wide = common
        .iter()
        .filter(|d| d.len() >= 2)
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)));
    if let Some(d) = wide {
        let mut rest = Vec::with_capacity(family.len());
        for t in &family {
            let q =
                divides_in_p(d, t, monoid, budget)?.expect("common divisors divide every member");
            rest.push(q);
        }
        let inner = constructive_mcd_in_p(&rest, monoid, budget)?;
        return Ok(sumset(d, &inner));
    }
    let union = FinSet::new(family.iter().flat_map(|t| t.iter().cloned()))?;
    let found = mcd(&union, monoid, budget)?;
    match found.into_iter().next() {
        Some(m0) => Ok(FinSet::singleton(m0)),
        None => Err(Error::Truncation {
            message: format!("no MCD of {union} within the truncation"),
            achieved: 0,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rat;
    use crate::monoid::Rank1Monoid;

    fn n0() -> Rank1Monoid {
        Rank1Monoid::new(vec![Rat::one()]).unwrap()
    }

    fn set(s: &str) -> FinSet<Rat> {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let m = n0();
        let mut b = Budget::default();
        assert_eq!(
            mcd_in_p(&[set("{0,1}"), set("{0,1,2}")], &m, &mut b).unwrap(),
            vec![set("{0,1}")]
        );
        assert_eq!(
            mcd_in_p(&[set("{3}")], &m, &mut b).unwrap(),
            vec![set("{3}")]
        );
        assert_eq!(
            mcd_in_p(&[set("{0,2}"), set("{0,3}")], &m, &mut b).unwrap(),
            vec![set("{0}")]
        );
        assert!(mcd_in_p(&[], &m, &mut b).is_err());
    }

    #[test]
    fn incomparable_mcds() {
        let m = Rank1Monoid::new(vec![Rat::int(2), Rat::int(3)]).unwrap();
        let mut b = Budget::default();
        // {2} + {0,1} would be needed to reach {2,3}, and 1 is not in <2,3>
        let fam = [set("{4,5}"), set("{5,6}")];
        assert_eq!(
            mcd_in_p(&fam, &m, &mut b).unwrap(),
            vec![set("{2}"), set("{2,3}")]
        );
        assert_eq!(
            constructive_mcd_in_p(&fam, &m, &mut b).unwrap(),
            set("{2,3}")
        );
        let fam = [set("{0,2}"), set("{0,3}")];
        assert_eq!(constructive_mcd_in_p(&fam, &m, &mut b).unwrap(), set("{0}"));
    }
}
