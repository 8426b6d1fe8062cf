use std::fmt;

use super::common::common_divisors;
use crate::budget::Budget;
use crate::element::Element;
use crate::error::Result;
use crate::monoid::Monoid;
use crate::powmon::{p_divisors, FinSet};

/// Result of checking the no-atom-divisor hypothesis on `T`.
#[derive(Clone, PartialEq, Eq)]
pub enum NoAtomOutcome<E> {
    /// Every non-unit divisor `S` of `T` and every singleton `{x} ≠ S`
    /// dividing it leave a singleton `{y} ∉ {{0}, S}` dividing `S − x`.
    /// No atom of the power monoid divides `T`.
    Holds { divisors_checked: usize },
    /// The hypothesis breaks at divisor `divisor` with translate `x`.
    Fails { divisor: FinSet<E>, x: E },
}

impl<E: Element> NoAtomOutcome<E> {
    pub fn holds(&self) -> bool {
        matches!(self, NoAtomOutcome::Holds { .. })
    }
}

impl<E: Element> fmt::Display for NoAtomOutcome<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoAtomOutcome::Holds { divisors_checked } => {
                write!(f, "hypothesis holds on {divisors_checked} divisors")
            }
            NoAtomOutcome::Fails { divisor, x } => {
                write!(f, "hypothesis fails at divisor {divisor} with x = {x}")
            }
        }
    }
}

impl<E: Element> fmt::Debug for NoAtomOutcome<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Checks the hypothesis of the no-atom-divisor criterion over the full
/// divisor set of `T`. The unit divisor `{0}` and the choice `{x} = S` are
/// skipped: taken literally they make the hypothesis unsatisfiable.
pub fn leo4_no_atom_divides<M: Monoid>(
    t: &FinSet<M::Elem>,
    monoid: &M,
    budget: &mut Budget,
) -> Result<NoAtomOutcome<M::Elem>> {
    let divisors = p_divisors(t, monoid, budget)?;
    let mut checked = 0;
    for s in divisors.iter().filter(|s| !s.is_zero()) {
        checked += 1;
        for x in common_divisors(s, monoid, budget)? {
            if s.is_singleton() && *s.min() == x {
                continue;
            }
            let rest = s.translate_back(&x);
            let ys = common_divisors(&rest, monoid, budget)?;
            let found = ys
                .iter()
                .any(|y| !y.is_zero() && !(s.is_singleton() && s.min() == y));
            if !found {
                return Ok(NoAtomOutcome::Fails {
                    divisor: s.clone(),
                    x,
                });
            }
        }
    }
    Ok(NoAtomOutcome::Holds {
        divisors_checked: checked,
    })
}
