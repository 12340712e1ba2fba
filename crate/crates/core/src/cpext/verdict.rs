use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::extension::{centralizer_genperm, cp_extensions, CpCandidate};
use super::genperm::GenPermMatrix;
use super::phase::SymPhase;
use super::potential::{
    invariant_terms, torus_group_of, GenericPotential, PhaseConstraintSystem, PotentialTerm,
};
use crate::classifier::{classify, TorusSubgroup};
use crate::error::{Error, Result};
use crate::exactmath::IntMatrix;
use crate::groups::GroupSignature;
use crate::monomials::Term;
use crate::torus::{PhaseVector, TorusBasis};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CpVerdict {
    Realizable,
    /// The constrained potential has an extra unitary symmetry.
    EnlargedUnitary {
        witness: GenPermMatrix,
        witness_text: String,
        commutes_with_base: bool,
    },
    /// Forced zeros leave too few charges; the torus symmetry grows.
    ContinuousDegeneration {
        killed: Vec<Term>,
        residual: GroupSignature,
    },
}

impl CpVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            CpVerdict::Realizable => "realizable",
            CpVerdict::EnlargedUnitary { .. } => "enlarged_unitary",
            CpVerdict::ContinuousDegeneration { .. } => "continuous_degeneration",
        }
    }

    pub fn is_realizable(&self) -> bool {
        matches!(self, CpVerdict::Realizable)
    }
}

#[derive(Clone, Debug)]
pub struct CpAnalysis {
    pub candidate: CpCandidate,
    pub potential: GenericPotential,
    pub constraints: PhaseConstraintSystem,
    pub verdict: CpVerdict,
}

/// Steps four and five: impose the antiunitary generator on the generic
/// A-invariant potential, then look for symmetry beyond the candidate.
pub fn cp_realizable(candidate: &CpCandidate) -> Result<CpAnalysis> {
    let a = &candidate.base;
    let n = a.n_doublets();
    let universe = invariant_terms(a);
    let potential = GenericPotential::build(n, &universe, &candidate.generator.unitary_part);
    let constraints = PhaseConstraintSystem::build(candidate, &potential);
    let residual = torus_group_of(a.basis(), &potential.support());
    let verdict = if residual.signature().torus_rank > a.signature().torus_rank {
        CpVerdict::ContinuousDegeneration {
            killed: potential.killed.clone(),
            residual: residual.signature().clone(),
        }
    } else if let Some(g) = residual.generators().iter().find(|g| !a.contains(g)) {
        let witness = GenPermMatrix::diagonal(g);
        CpVerdict::EnlargedUnitary {
            witness_text: witness.render(&potential.symbol_names),
            witness,
            commutes_with_base: true,
        }
    } else if let Some(h) = potential.unitary_symmetry() {
        let commutes = centralizer_genperm(a).contains(&h);
        CpVerdict::EnlargedUnitary {
            witness_text: h.render(&potential.symbol_names),
            witness: h,
            commutes_with_base: commutes,
        }
    } else {
        CpVerdict::Realizable
    };
    Ok(CpAnalysis {
        candidate: candidate.clone(),
        potential,
        constraints,
        verdict,
    })
}

/// One representative torus subgroup per realizable signature and
/// embedding, the trivial group first.
pub fn torus_embeddings(n_doublets: usize) -> Result<Vec<TorusSubgroup>> {
    let result = classify(n_doublets, true)?;
    let basis = TorusBasis::new(n_doublets)?;
    let mut out = vec![TorusSubgroup::from_charges(
        &basis,
        &IntMatrix::identity(basis.dim()),
    )?];
    for entry in &result.entries {
        for e in &entry.embeddings {
            out.push(TorusSubgroup::from_terms(&basis, &e.witness)?);
        }
    }
    Ok(out)
}

/// Every candidate over the given bases, analysed.
pub fn analyse_all(bases: &[TorusSubgroup]) -> Result<Vec<CpAnalysis>> {
    let candidates: Vec<CpCandidate> = bases
        .iter()
        .map(cp_extensions)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    candidates.par_iter().map(cp_realizable).collect()
}

#[derive(Clone, Debug)]
pub struct CpClassification {
    pub n_doublets: usize,
    pub analyses: Vec<CpAnalysis>,
    pub realizable: Vec<GroupSignature>,
    /// Signatures no candidate realizes, with every failure mode seen.
    pub rejected: Vec<(GroupSignature, Vec<&'static str>)>,
}

pub fn classify_cp(n_doublets: usize) -> Result<CpClassification> {
    if n_doublets != 3 {
        return Err(Error::Unsupported(format!(
            "antiunitary classification is settled only for 3 doublets, got {n_doublets}"
        )));
    }
    let analyses = analyse_all(&torus_embeddings(n_doublets)?)?;
    let mut by_sig: BTreeMap<GroupSignature, Vec<&CpAnalysis>> = BTreeMap::new();
    for a in &analyses {
        by_sig
            .entry(a.candidate.signature.clone())
            .or_default()
            .push(a);
    }
    let mut realizable = Vec::new();
    let mut rejected = Vec::new();
    for (sig, items) in by_sig {
        if items.iter().any(|a| a.verdict.is_realizable()) {
            realizable.push(sig);
        } else {
            let mut kinds: Vec<&'static str> = items.iter().map(|a| a.verdict.kind()).collect();
            kinds.sort();
            kinds.dedup();
            rejected.push((sig, kinds));
        }
    }
    Ok(CpClassification {
        n_doublets,
        analyses,
        realizable,
        rejected,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Z3Z3Report {
    pub a: GenPermMatrix,
    pub b: GenPermMatrix,
    pub swap: GenPermMatrix,
    pub invariant_under_a: bool,
    pub invariant_under_b: bool,
    pub invariant_under_swap: bool,
    pub generators_commute: bool,
    /// `s a s⁻¹ a⁻¹` for the swap `s`.
    pub commutator: PhaseVector,
    pub commutator_central: bool,
    pub diagonal_symmetry: GroupSignature,
    pub realizable: bool,
}

/// The `Z3×Z3`-invariant 3HDM potential with generic coefficients.
pub fn z3z3_potential() -> GenericPotential {
    let n = 3;
    let mut terms: Vec<PotentialTerm> = Vec::new();
    let mut push = |term: Term, magnitude: usize, phase: SymPhase| {
        terms.push(PotentialTerm {
            term,
            magnitude,
            phase,
        })
    };
    for a in 0..n {
        push(Term::quadratic(a, a), 0, SymPhase::zero());
        push(Term::quartic((a, a), (a, a)), 1, SymPhase::zero());
        for b in a + 1..n {
            push(Term::quartic((a, a), (b, b)), 2, SymPhase::zero());
            push(Term::quartic((a, b), (b, a)), 3, SymPhase::zero());
        }
        let (b, c) = ((a + 1) % n, (a + 2) % n);
        let t = Term::quartic((a, b), (a, c));
        push(t.conjugate(), 4, -&SymPhase::symbol(0));
        push(t, 4, SymPhase::symbol(0));
    }
    terms.sort_by(|x, y| x.term.cmp(&y.term));
    let canonical = |k: usize| -> Vec<Term> {
        let mut v: Vec<Term> = terms
            .iter()
            .filter(|p| p.magnitude == k && p.term.is_canonical())
            .map(|p| p.term.clone())
            .collect();
        v.sort();
        v
    };
    let orbits = (0..5).map(canonical).collect();
    GenericPotential {
        n_doublets: n,
        terms,
        orbits,
        symbol_names: vec!["arg(λ3)".into()],
        killed: Vec::new(),
    }
}

pub fn check_z3z3() -> Z3Z3Report {
    let v = z3z3_potential();
    let a = GenPermMatrix::diagonal(&PhaseVector::from_ratios(&[(0, 1), (1, 3), (2, 3)]));
    let b = GenPermMatrix::permutation(vec![1, 2, 0]);
    let swap = GenPermMatrix::permutation(vec![1, 0, 2]);
    let comm = swap
        .compose(&a)
        .compose(&swap.inverse())
        .compose(&a.inverse());
    let commutator = comm.constant_phases().expect("constant phases");
    let commutator_central = comm.is_scalar();
    let basis = TorusBasis::new(3).expect("three doublets");
    let diagonal_symmetry = torus_group_of(&basis, &v.support()).signature().clone();
    let invariant_under_swap = v.is_invariant_under(&swap, false);
    Z3Z3Report {
        invariant_under_a: v.is_invariant_under(&a, false),
        invariant_under_b: v.is_invariant_under(&b, false),
        generators_commute: a.commutes_mod_center(&b),
        invariant_under_swap,
        realizable: !(invariant_under_swap && !commutator_central),
        commutator,
        commutator_central,
        diagonal_symmetry,
        a,
        b,
        swap,
    }
}
