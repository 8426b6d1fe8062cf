//! Finitely generated reduced monoids with exact membership, divisors,
//! atoms and factorizations.

mod factorization;
pub mod family;
mod rank1;
mod rank2;
mod spec;

pub use factorization::Factorization;
pub use family::{ex44_generators, odd_prime_generators, rank2_generators, Ex44Generators};
pub use rank1::Rank1Monoid;
pub use rank2::Rank2Monoid;
pub use spec::{FamilySpec, FamilyTag, Generators, Kind, MonoidSpec};

pub(crate) use rank1::Rank1Search;

use crate::budget::Budget;
use crate::element::Element;
use crate::error::Result;

/// A reduced, positive, finitely generated monoid.
///
/// Truncations of infinitely generated monoids set `is_truncated`; their
/// positive answers hold in the full monoid and their negative answers only
/// within the truncation.
pub trait Monoid: Send + Sync {
    type Elem: Element;

    /// Sorted, deduplicated generators.
    fn generators(&self) -> &[Self::Elem];

    /// Generators that are not sums of other generators, sorted.
    fn atoms(&self) -> &[Self::Elem];

    fn is_truncated(&self) -> bool;

    /// Negative elements are never members.
    fn member(&self, q: &Self::Elem, budget: &mut Budget) -> Result<bool>;

    /// Every factorization of `b` into atoms, sorted; empty when `b` is not
    /// a member.
    fn factorizations(
        &self,
        b: &Self::Elem,
        budget: &mut Budget,
    ) -> Result<Vec<Factorization<Self::Elem>>>;

    fn factorize_one(
        &self,
        b: &Self::Elem,
        budget: &mut Budget,
    ) -> Result<Option<Factorization<Self::Elem>>>;

    /// `{d ∈ M : d | b}`, sorted. Fails with invalid input when `b ∉ M`.
    fn divisors(&self, b: &Self::Elem, budget: &mut Budget) -> Result<Vec<Self::Elem>>;

    /// Members below `bound` (coordinatewise for points), sorted.
    fn members_below(&self, bound: &Self::Elem, budget: &mut Budget) -> Result<Vec<Self::Elem>>;

    fn divides(&self, d: &Self::Elem, b: &Self::Elem, budget: &mut Budget) -> Result<bool> {
        let diff = b.sub(d);
        if diff < Self::Elem::zero() {
            return Ok(false);
        }
        self.member(&diff, budget)
    }

    fn is_atom(&self, a: &Self::Elem) -> bool {
        self.atoms().binary_search(a).is_ok()
    }

    /// Atoms dividing `b`, sorted.
    fn atom_divisors(&self, b: &Self::Elem, budget: &mut Budget) -> Result<Vec<Self::Elem>> {
        let mut out = Vec::new();
        for a in self.atoms() {
            if self.divides(a, b, budget)? {
                out.push(a.clone());
            }
        }
        Ok(out)
    }
}

/// A built monoid of either supported rank.
pub enum AnyMonoid {
    Rank1(Rank1Monoid),
    Rank2(Rank2Monoid),
}
