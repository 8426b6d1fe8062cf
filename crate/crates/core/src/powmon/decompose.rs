use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::divide::singleton_candidates;
use super::finset::{sumset, FinSet};
use crate::budget::Budget;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::monoid::Monoid;

/// `left + right` equals the decomposed set; neither side is `{0}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decomposition<E> {
    pub left: FinSet<E>,
    pub right: FinSet<E>,
}

impl<E: Element> Decomposition<E> {
    fn new(a: FinSet<E>, b: FinSet<E>) -> Self {
        if a <= b {
            Decomposition { left: a, right: b }
        } else {
            Decomposition { left: b, right: a }
        }
    }

    pub fn sum(&self) -> FinSet<E> {
        sumset(&self.left, &self.right)
    }
}

impl<E: Element> fmt::Display for Decomposition<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}", self.left, self.right)
    }
}

impl<E: Element> fmt::Debug for Decomposition<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// What the search should stop on.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    All,
    /// Any nontrivial decomposition.
    First,
    /// Any decomposition with both sides of size at least two.
    FirstWide,
}

/// Left factors `U` for which the candidate set `C` satisfies `U + C = S`,
/// paired with `C`. `U` ranges over subsets of `S − (min S − a)` for
/// divisors `a` of `min S`, so `min U = a`; its maximum must divide
/// `max S` and `|U| ≤ |S|`.
fn scan<M: Monoid>(
    s: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
    mut visit: impl FnMut(FinSet<M::Elem>, FinSet<M::Elem>, &mut Budget) -> Result<bool>,
) -> Result<()> {
    let min = s.min().clone();
    let max = s.max().clone();
    for a in monoid.divisors(&min, budget)? {
        let b = min.sub(&a);
        let mut pool = Vec::new();
        for x in s.iter() {
            let u = x.sub(&b);
            if u > a && monoid.member(&u, budget)? {
                pool.push(u);
            }
        }
        let k = pool.len();
        if k >= 63 {
            return Err(Error::Unsupported(format!(
                "decomposition search over a set of size {}",
                s.len()
            )));
        }
        for mask in 0u64..(1u64 << k) {
            budget.tick()?;
            let mut u = Vec::with_capacity(mask.count_ones() as usize + 1);
            u.push(a.clone());
            u.extend(
                (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| pool[i].clone()),
            );
            if u.len() > s.len() {
                continue;
            }
            let top = u.last().expect("nonempty");
            if !monoid.member(&max.sub(top), budget)? {
                continue;
            }
            let u = FinSet::from_sorted(u);
            let Some(c) = singleton_candidates(&u, s, monoid, budget)? else {
                continue;
            };
            budget.charge((u.len() * c.len()) as u64)?;
            if sumset(&u, &c) != *s {
                continue;
            }
            if !visit(u, c, budget)? {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Subsets `V ⊆ C` with `U + V = S`; `V` must contain `min S − min U` and
/// `max S − max U`.
fn right_factors<E: Element>(
    u: &FinSet<E>,
    c: &FinSet<E>,
    s: &FinSet<E>,
    budget: &mut Budget,
) -> Result<Vec<FinSet<E>>> {
    let lo = s.min().sub(u.min());
    let hi = s.max().sub(u.max());
    let free: Vec<&E> = c.iter().filter(|x| **x != lo && **x != hi).collect();
    if free.len() >= 63 {
        return Err(Error::Unsupported("right-factor search is too wide".into()));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << free.len()) {
        budget.tick()?;
        let v = FinSet::new(
            [lo.clone(), hi.clone()].into_iter().chain(
                (0..free.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| free[i].clone()),
            ),
        )?;
        budget.charge((u.len() * v.len()) as u64)?;
        if sumset(u, &v) == *s {
            out.push(v);
        }
    }
    Ok(out)
}

fn search<M: Monoid>(
    s: &FinSet<M::Elem>,
    monoid: &M,
    goal: Goal,
    budget: &mut Budget,
) -> Result<Vec<Decomposition<M::Elem>>> {
    let mut found = BTreeSet::new();
    let res = scan(s, monoid, budget, |u, c, budget| {
        if u.is_zero() {
            return Ok(true);
        }
        match goal {
            Goal::First => {
                if !c.is_zero() {
                    found.insert(Decomposition::new(u, c));
                    return Ok(false);
                }
                Ok(true)
            }
            Goal::FirstWide => {
                if u.len() >= 2 && c.len() >= 2 {
                    found.insert(Decomposition::new(u, c));
                    return Ok(false);
                }
                Ok(true)
            }
            Goal::All => {
                for v in right_factors(&u, &c, s, budget)? {
                    if !v.is_zero() {
                        found.insert(Decomposition::new(u.clone(), v));
                    }
                }
                Ok(true)
            }
        }
    });
    let n = found.len();
    res.map_err(|e| e.with_progress(n))?;
    Ok(found.into_iter().collect())
}

/// Every pair `(U, V)`, up to swap, with `U + V = S` and neither side `{0}`.
pub fn decompositions<M: Monoid>(
    s: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<Vec<Decomposition<M::Elem>>> {
    search(s, monoid, Goal::All, budget)
}

/// Some nontrivial decomposition, if any exists.
pub fn first_decomposition<M: Monoid>(
    s: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<Option<Decomposition<M::Elem>>> {
    Ok(search(s, monoid, Goal::First, budget)?.pop())
}

/// Verdict of an atom test with the search effort spent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomVerdict<E: Element> {
    pub is_atom: bool,
    /// A decomposition refuting atomhood.
    pub witness: Option<Decomposition<E>>,
    /// Search nodes used by the exhaustive search.
    pub nodes: u64,
}

/// Whether `S` is an atom of the power monoid. Singletons are atoms
/// exactly when their element is an atom of `M`, since singletons form a
/// divisor-closed copy of `M`.
pub fn is_p_atom<M: Monoid>(
    s: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<AtomVerdict<M::Elem>> {
    if s.is_zero() {
        return Err(Error::invalid("{0} is the identity, not an atom"));
    }
    let start = budget.used();
    if s.is_singleton() {
        let x = s.min();
        if !monoid.member(x, budget)? {
            return Err(Error::invalid(format!("{x} is not in the monoid")));
        }
        let witness = if monoid.is_atom(x) {
            None
        } else {
            let z = monoid
                .factorize_one(x, budget)?
                .ok_or_else(|| Error::invalid(format!("{x} is not in the monoid")))?;
            let atoms = z.atoms_flat();
            let first = atoms[0].clone();
            Some(Decomposition::new(
                FinSet::singleton(first.clone()),
                FinSet::singleton(x.sub(&first)),
            ))
        };
        return Ok(AtomVerdict {
            is_atom: witness.is_none(),
            witness,
            nodes: budget.used() - start,
        });
    }
    let witness = first_decomposition(s, monoid, budget)?;
    Ok(AtomVerdict {
        is_atom: witness.is_none(),
        witness,
        nodes: budget.used() - start,
    })
}

/// No decomposition has both sides of size at least two.
pub fn is_indecomposable<M: Monoid>(
    s: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<bool> {
    if s.len() <= 2 {
        return Ok(true);
    }
    Ok(search(s, monoid, Goal::FirstWide, budget)?.is_empty())
}

/// `S ∪ {4·max S}` when `min S + max S > 0`, `S ∪ {4·min S}` when it is
/// negative.
pub fn augment_indecomposable<E: Element>(s: &FinSet<E>) -> Result<FinSet<E>> {
    if s.len() < 2 {
        return Err(Error::invalid("augmenting needs at least two elements"));
    }
    let edge = s.min().add(s.max());
    let zero = E::zero();
    let extra = if edge > zero {
        s.max().times(4)
    } else if edge < zero {
        s.min().times(4)
    } else {
        return Err(Error::Unsupported("min S + max S = 0".into()));
    };
    FinSet::new(s.iter().cloned().chain([extra]))
}

/// Every divisor of `T` in the power monoid: `{0}`, `T` and both sides of
/// every decomposition.
pub fn p_divisors<M: Monoid>(
    t: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<Vec<FinSet<M::Elem>>> {
    let mut out = BTreeSet::from([FinSet::zero(), t.clone()]);
    for d in decompositions(t, monoid, budget)? {
        out.insert(d.left);
        out.insert(d.right);
    }
    Ok(out.into_iter().collect())
}

/// A factorization of `S` into atoms of the power monoid, sorted.
/// `{0}` factors as the empty list.
pub fn p_factorize<M: Monoid>(
    s: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<Vec<FinSet<M::Elem>>> {
    let mut memo = HashMap::new();
    let mut out = factor_rec(s, monoid, budget, &mut memo)?;
    out.sort();
    Ok(out)
}

type Memo<E> = HashMap<FinSet<E>, Vec<FinSet<E>>>;

fn factor_rec<M: Monoid>(
    s: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
    memo: &mut Memo<M::Elem>,
) -> Result<Vec<FinSet<M::Elem>>> {
    if s.is_zero() {
        return Ok(Vec::new());
    }
    if let Some(hit) = memo.get(s) {
        return Ok(hit.clone());
    }
    budget.tick()?;
    let parts = if s.is_singleton() {
        let z = monoid
            .factorize_one(s.min(), budget)?
            .ok_or_else(|| Error::invalid(format!("{} is not in the monoid", s.min())))?;
        z.atoms_flat().into_iter().map(FinSet::singleton).collect()
    } else {
        let m = s.min().clone();
        let shifted = s.translate_back(&m);
        let mut translatable = !m.is_zero();
        if translatable {
            for x in shifted.iter() {
                if !monoid.member(x, budget)? {
                    translatable = false;
                    break;
                }
            }
        }
        if translatable {
            let mut v = factor_rec(&FinSet::singleton(m), monoid, budget, memo)?;
            v.extend(factor_rec(&shifted, monoid, budget, memo)?);
            v
        } else {
            match first_decomposition(s, monoid, budget)? {
                Some(d) => {
                    let mut v = factor_rec(&d.left, monoid, budget, memo)?;
                    v.extend(factor_rec(&d.right, monoid, budget, memo)?);
                    v
                }
                None => vec![s.clone()],
            }
        }
    };
    memo.insert(s.clone(), parts.clone());
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rat;
    use crate::monoid::Rank1Monoid;

    fn num(gens: &[i64]) -> Rank1Monoid {
        Rank1Monoid::new(gens.iter().map(|&g| Rat::int(g)).collect()).unwrap()
    }

    fn set(s: &str) -> FinSet<Rat> {
        s.parse().unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let m = num(&[1]);
        let mut b = Budget::default();
        let d = decompositions(&set("{0,1,2}"), &m, &mut b).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(
            (d[0].left.clone(), d[0].right.clone()),
            (set("{0,1}"), set("{0,1}"))
        );
        assert!(decompositions(&set("{0,1}"), &m, &mut b)
            .unwrap()
            .is_empty());
        assert!(decompositions(&set("{0,1,7}"), &m, &mut b)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn translations_are_decompositions() {
        let m = num(&[1]);
        let mut b = Budget::default();
        let d = decompositions(&set("{1,2}"), &m, &mut b).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].left, set("{0,1}"));
        assert_eq!(d[0].right, set("{1}"));
    }

    #[test]
    fn atom_examples() {
        let mut b = Budget::default();
        assert!(
            is_p_atom(&set("{0,1}"), &num(&[1]), &mut b)
                .unwrap()
                .is_atom
        );
        assert!(
            !is_p_atom(&set("{0,1,2}"), &num(&[1]), &mut b)
                .unwrap()
                .is_atom
        );
        assert!(
            is_p_atom(&set("{2}"), &num(&[2, 3]), &mut b)
                .unwrap()
                .is_atom
        );
        assert!(
            !is_p_atom(&set("{4}"), &num(&[2, 3]), &mut b)
                .unwrap()
                .is_atom
        );
        assert!(is_p_atom(&FinSet::zero(), &num(&[1]), &mut b).is_err());
    }

    #[test]
    fn indecomposable_examples() {
        let m = num(&[1]);
        let mut b = Budget::default();
        assert!(is_indecomposable(&set("{1,2,8}"), &m, &mut b).unwrap());
        assert!(!is_indecomposable(&set("{0,1,2}"), &m, &mut b).unwrap());
        assert!(is_indecomposable(&set("{3,9}"), &m, &mut b).unwrap());
    }

    #[test]
    fn augment_examples() {
        assert_eq!(
            augment_indecomposable(&set("{1,2}")).unwrap(),
            set("{1,2,8}")
        );
        assert_eq!(
            augment_indecomposable(&set("{2,3}")).unwrap(),
            set("{2,3,12}")
        );
        assert_eq!(
            augment_indecomposable(&set("{-3,1}")).unwrap(),
            set("{-12,-3,1}")
        );
        assert!(matches!(
            augment_indecomposable(&set("{-2,2}")),
            Err(Error::Unsupported(_))
        ));
        assert!(augment_indecomposable(&set("{1}")).is_err());
    }

    #[test]
    fn factorization_examples() {
        let mut b = Budget::default();
        assert_eq!(
            p_factorize(&set("{0,1,2}"), &num(&[1]), &mut b).unwrap(),
            vec![set("{0,1}"), set("{0,1}")]
        );
        assert_eq!(
            p_factorize(&set("{0,1}"), &num(&[1]), &mut b).unwrap(),
            vec![set("{0,1}")]
        );
        assert_eq!(
            p_factorize(&set("{4}"), &num(&[2, 3]), &mut b).unwrap(),
            vec![set("{2}"), set("{2}")]
        );
        assert!(p_factorize(&FinSet::zero(), &num(&[1]), &mut b)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn divisors_of_a_set() {
        let mut b = Budget::default();
        let d = p_divisors(&set("{0,1,2}"), &num(&[1]), &mut b).unwrap();
        assert_eq!(d, vec![set("{0}"), set("{0,1}"), set("{0,1,2}")]);
    }
}
