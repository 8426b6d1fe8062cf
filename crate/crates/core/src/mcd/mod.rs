//! Common divisors, maximal common divisors and the residue invariant.

mod common;
mod ex44;
mod leo;
mod power;
mod residue;

pub use common::{
    common_divisors, extending_atom, find_mcd, is_common_divisor, is_mcd_monoid_sample, mcd,
    mcd_sample_sets, subsets_up_to, McdVerdict,
};
pub use ex44::{chain_values, ex44_chain, ex44_witness, McdWitnessStep};
pub use leo::{leo4_no_atom_divides, NoAtomOutcome};
pub use power::{constructive_mcd_in_p, mcd_in_p, p_common_divisors};
pub use residue::{cap_constant_on, cap_residue, ResidueClass};
