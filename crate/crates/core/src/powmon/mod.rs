//! The finitary power monoid: nonempty finite subsets under sumset.

mod decompose;
mod divide;
mod finset;

pub use decompose::{
    augment_indecomposable, decompositions, first_decomposition, is_indecomposable, is_p_atom,
    p_divisors, p_factorize, AtomVerdict, Decomposition,
};
pub use divide::{divides_in_p, singleton_candidates};
pub use finset::{sum_all, sumset, FinSet};
