use std::fmt;

use crate::arith::Rat;
use crate::budget::Budget;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::mcd::common_divisors;
use crate::monoid::{Monoid, Rank1Monoid};
use crate::powmon::{divides_in_p, p_divisors, FinSet};

/// Outcome of a sweep over members below a bound.
#[derive(Clone, PartialEq, Eq)]
pub enum SweepVerdict<E> {
    Holds { checked: usize },
    Counterexample { element: E },
}

impl<E> SweepVerdict<E> {
    pub fn holds(&self) -> bool {
        matches!(self, SweepVerdict::Holds { .. })
    }
}

impl<E: fmt::Display> fmt::Display for SweepVerdict<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepVerdict::Holds { checked } => write!(f, "holds on {checked} elements"),
            SweepVerdict::Counterexample { element } => write!(f, "fails at {element}"),
        }
    }
}

impl<E: fmt::Display> fmt::Debug for SweepVerdict<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Whether every nonzero member up to `bound` has an atom divisor.
pub fn is_furstenberg_sample<M: Monoid>(
    monoid: &M,
    bound: &M::Elem,
    budget: &mut Budget,
) -> Result<SweepVerdict<M::Elem>> {
    let members = monoid.members_below(bound, budget)?;
    let mut checked = 0;
    for b in members.iter().filter(|b| !b.is_zero()) {
        checked += 1;
        let mut any = false;
        for a in monoid.atoms() {
            if monoid.divides(a, b, budget)? {
                any = true;
                break;
            }
        }
        if !any {
            return Ok(SweepVerdict::Counterexample { element: b.clone() });
        }
    }
    Ok(SweepVerdict::Holds { checked })
}

/// `|Z(b)|`.
pub fn ffm_count<M: Monoid>(b: &M::Elem, monoid: &M, budget: &mut Budget) -> Result<usize> {
    if !monoid.member(b, budget)? {
        return Err(Error::invalid(format!("{b} is not in the monoid")));
    }
    Ok(monoid.factorizations(b, budget)?.len())
}

/// Which half of the dichotomy produced a power-monoid atom divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DivisorBranch {
    /// A non-unit singleton `{d}` divides `S`; the atom is `{a}` for an
    /// atom `a` of `M` dividing `d`.
    Singleton,
    /// No non-unit singleton divides `S`; the atom is a divisor of
    /// least cardinality among those with at least two elements.
    Wide,
}

impl fmt::Display for DivisorBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DivisorBranch::Singleton => "singleton",
            DivisorBranch::Wide => "wide",
        })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FurstenbergDivisor<E> {
    pub atom: FinSet<E>,
    pub branch: DivisorBranch,
    /// `S = atom + quotient`.
    pub quotient: FinSet<E>,
}

impl<E: Element> fmt::Display for FurstenbergDivisor<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} branch), quotient {}",
            self.atom, self.branch, self.quotient
        )
    }
}

impl<E: Element> fmt::Debug for FurstenbergDivisor<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An atom of the power monoid dividing `S ≠ {0}`.
pub fn p_furstenberg_divisor<M: Monoid>(
    s: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<FurstenbergDivisor<M::Elem>> {
    if s.is_zero() {
        return Err(Error::invalid("{0} is a unit"));
    }
    let quotient = |atom: &FinSet<M::Elem>, budget: &mut Budget| {
        divides_in_p(atom, s, monoid, budget)?
            .ok_or_else(|| Error::invalid(format!("{atom} does not divide {s}")))
    };
    let cd = common_divisors(s, monoid, budget)?;
    if let Some(d) = cd.iter().find(|d| !d.is_zero()) {
        let a = monoid
            .atoms()
            .iter()
            .find(|a| monoid.divides(a, d, budget).unwrap_or(false))
            .cloned()
            .ok_or_else(|| Error::invalid(format!("no atom divides {d}")))?;
        let atom = FinSet::singleton(a);
        let q = quotient(&atom, budget)?;
        return Ok(FurstenbergDivisor {
            atom,
            branch: DivisorBranch::Singleton,
            quotient: q,
        });
    }
    let atom = p_divisors(s, monoid, budget)?
        .into_iter()
        .filter(|d| d.len() >= 2)
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
        .expect("S has at least two elements when no singleton divides it");
    let q = quotient(&atom, budget)?;
    Ok(FurstenbergDivisor {
        atom,
        branch: DivisorBranch::Wide,
        quotient: q,
    })
}

/// Longest atom descent seen by [`tidf_implies_atomic_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentReport {
    pub checked: usize,
    /// Element with the longest descent and its number of steps.
    pub longest: (Rat, u64),
    /// First element whose descent broke the `⌈b / min atom⌉` bound or
    /// got stuck, if any.
    pub failure: Option<(Rat, u64)>,
}

impl DescentReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// From every member `b ≤ bound`, repeatedly subtract the least atom
/// dividing the current value; checks that the descent reaches 0 within
/// `⌈b / min atom⌉` steps.
pub fn tidf_implies_atomic_check(
    monoid: &Rank1Monoid,
    bound: &Rat,
    budget: &mut Budget,
) -> Result<DescentReport> {
    let min_atom = monoid
        .atoms()
        .first()
        .cloned()
        .ok_or_else(|| Error::invalid("the trivial monoid has no atoms"))?;
    let members = monoid.members_below(bound, budget)?;
    let mut report = DescentReport {
        checked: 0,
        longest: (Rat::zero(), 0),
        failure: None,
    };
    for b in members {
        report.checked += 1;
        let cap = b.div(&min_atom)?;
        let cap = cap.to_integer().unwrap_or_else(|| cap.floor() + 1u32);
        let mut q = b.clone();
        let mut steps = 0u64;
        while !q.is_zero() {
            let mut next = None;
            for a in monoid.atoms() {
                if monoid.divides(a, &q, budget)? {
                    next = Some(a.clone());
                    break;
                }
            }
            let Some(a) = next else {
                report.failure = Some((b.clone(), steps));
                return Ok(report);
            };
            q = &q - &a;
            steps += 1;
        }
        if num_bigint::BigInt::from(steps) > cap {
            report.failure = Some((b.clone(), steps));
            return Ok(report);
        }
        if steps > report.longest.1 {
            report.longest = (b, steps);
        }
    }
    Ok(report)
}
