//! Atomicity-hierarchy checks and the rank-2 construction.

mod canonical;
mod chains;
mod furstenberg;
mod rank2_checks;

pub use canonical::{
    canonical_decomp_q, check_in_open_band, k_of, rank2_atom, Branch, CanonicalDecompQ,
};
pub use chains::{accp_chain_explore, cardinality_profile, p_accp_chain_explore, ChainReport};
pub use furstenberg::{
    ffm_count, is_furstenberg_sample, p_furstenberg_divisor, tidf_implies_atomic_check,
    DescentReport, DivisorBranch, FurstenbergDivisor, SweepVerdict,
};
pub use rank2_checks::{
    forbidden_pair, lemma54_sum_witness, thm55_projection_check, ProjectionReport, SumWitness,
};
