//! Abelian extensions of torus subgroups by antiunitary maps, restricted to
//! generalized-permutation matrices with exact rational phases.
//!
//! The search space is a soundness boundary: a `realizable` verdict means
//! no generalized-permutation unitary enlarges the group. For three
//! doublets this covers every case that arises.

mod extension;
mod genperm;
mod phase;
mod potential;
mod verdict;

pub use extension::{
    centralizer_genperm, commutant_support, cp_extensions, valid_involutions, Centralizer,
    CpCandidate,
};
pub use genperm::{AntiunitaryCandidate, GenPermMatrix};
pub use phase::SymPhase;
pub use potential::{
    all_terms, invariant_terms, torus_group_of, GenericPotential, PhaseConstraintSystem,
    PotentialTerm,
};
pub use verdict::{
    analyse_all, check_z3z3, classify_cp, cp_realizable, torus_embeddings, z3z3_potential,
    CpAnalysis, CpClassification, CpVerdict, Z3Z3Report,
};
