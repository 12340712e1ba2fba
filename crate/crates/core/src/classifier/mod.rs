//! Realizable subgroups of the maximal torus: each lattice of invariant
//! charges spanned by monomials gives one group, and every such group is
//! realized by the monomials plus the torus-invariant backbone.

mod scan;
mod subgroup;

use std::collections::{BTreeMap, HashMap};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use scan::{lattice_closure, subset_scan, LatticeRecord};
pub use subgroup::TorusSubgroup;

use crate::error::{Error, Result};
use crate::exactmath::IntMatrix;
use crate::groups::{abelian_groups_of_order, GroupSignature};
use crate::monomials::{backbone_text, enumerate_monomials, Monomial, RenderStyle};
use crate::torus::{PhaseVector, TorusBasis};
use scan::Relabeller;

pub const MAX_CLASSIFY_DOUBLETS: usize = 6;

/// One inequivalent way (up to relabelling doublets) a signature sits in
/// the torus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub eigenspace_pattern: Vec<usize>,
    pub witness: Vec<Monomial>,
    pub lattices: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub signature: GroupSignature,
    pub witness: Vec<Monomial>,
    pub generators: Vec<PhaseVector>,
    pub embeddings: Vec<Embedding>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub n_doublets: usize,
    pub entries: Vec<ClassEntry>,
    pub max_finite_order: u64,
    pub lattice_count: usize,
}

impl ClassificationResult {
    pub fn signatures(&self) -> Vec<GroupSignature> {
        self.entries.iter().map(|e| e.signature.clone()).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.signature.name()).collect()
    }
}

fn check_range(n_doublets: usize, max: usize) -> Result<()> {
    if (2..=max).contains(&n_doublets) {
        Ok(())
    } else {
        Err(Error::DoubletRange(n_doublets))
    }
}

/// Group of `terms` together with the torus-invariant backbone.
pub fn symmetry_group_of_terms(terms: &[Monomial], basis: &TorusBasis) -> Result<TorusSubgroup> {
    TorusSubgroup::from_terms(basis, terms)
}

/// Every realizable torus subgroup (lattice of invariant charges), with its
/// minimum-size witness.
pub fn realizable_subgroups(n_doublets: usize) -> Result<Vec<(TorusSubgroup, Vec<Monomial>)>> {
    check_range(n_doublets, MAX_CLASSIFY_DOUBLETS)?;
    let basis = TorusBasis::new(n_doublets)?;
    let monomials = enumerate_monomials(n_doublets);
    lattice_closure(n_doublets)?
        .par_iter()
        .map(|r| {
            let g = TorusSubgroup::from_charges(&basis, &r.lattice)?;
            let w = r.witness.iter().map(|&i| monomials[i].clone()).collect();
            Ok((g, w))
        })
        .collect()
}

pub fn classify(n_doublets: usize, include_continuous: bool) -> Result<ClassificationResult> {
    let all = realizable_subgroups(n_doublets)?;
    let lattice_count = all.len();
    let basis = TorusBasis::new(n_doublets)?;
    let orbit = relabelling_orbits(&basis, &all);

    let mut by_signature: BTreeMap<GroupSignature, BTreeMap<usize, Vec<usize>>> = BTreeMap::new();
    for (i, item) in all.iter().enumerate() {
        by_signature
            .entry(item.0.signature().clone())
            .or_default()
            .entry(orbit[i])
            .or_default()
            .push(i);
    }
    let max_finite_order = by_signature
        .keys()
        .filter(|g| g.is_finite())
        .filter_map(|g| g.finite_order().to_u64())
        .max()
        .unwrap_or(1);

    let best_of = |members: &[usize]| -> usize {
        *members
            .iter()
            .min_by(|&&a, &&b| witness_cmp(&all[a].1, &all[b].1))
            .expect("nonempty")
    };
    let mut entries = Vec::new();
    for (signature, orbits) in by_signature {
        if signature.is_trivial() || (!include_continuous && !signature.is_finite()) {
            continue;
        }
        let mut embeddings: Vec<Embedding> = orbits
            .values()
            .map(|members| {
                let best = &all[best_of(members)];
                Embedding {
                    eigenspace_pattern: best.0.eigenspace_pattern(),
                    witness: best.1.clone(),
                    lattices: members.len(),
                }
            })
            .collect();
        embeddings.sort_by(|a, b| witness_cmp(&a.witness, &b.witness));
        let members: Vec<usize> = orbits.values().flatten().copied().collect();
        let best = &all[best_of(&members)];
        entries.push(ClassEntry {
            signature,
            witness: best.1.clone(),
            generators: best.0.generators().to_vec(),
            embeddings,
        });
    }
    Ok(ClassificationResult {
        n_doublets,
        entries,
        max_finite_order,
        lattice_count,
    })
}

/// Orbit label of each lattice under relabelling of doublets. The set of
/// realizable lattices is closed under relabelling, so joining each lattice
/// with its images under adjacent transpositions suffices.
fn relabelling_orbits(basis: &TorusBasis, all: &[(TorusSubgroup, Vec<Monomial>)]) -> Vec<usize> {
    let n = basis.n_doublets();
    let relabeller = Relabeller::new(basis);
    let index: HashMap<&IntMatrix, usize> = all
        .iter()
        .enumerate()
        .map(|(i, g)| (g.0.lattice(), i))
        .collect();
    let swaps: Vec<Vec<usize>> = (0..n - 1)
        .map(|k| {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(k, k + 1);
            p
        })
        .collect();
    let images: Vec<Vec<usize>> = all
        .par_iter()
        .map(|g| {
            swaps
                .iter()
                .map(|p| index[&relabeller.relabel(g.0.lattice(), p)])
                .collect()
        })
        .collect();
    let mut parent: Vec<usize> = (0..all.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, imgs) in images.iter().enumerate() {
        for &j in imgs {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    (0..all.len()).map(|i| find(&mut parent, i)).collect()
}

fn witness_cmp(a: &[Monomial], b: &[Monomial]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Largest finite order found, and whether it equals `2^(N−1)`.
pub fn verify_order_bound(n_doublets: usize) -> Result<(u64, bool)> {
    check_range(n_doublets, 5)?;
    let r = classify(n_doublets, false)?;
    let bound = 1u64 << (n_doublets - 1);
    Ok((r.max_finite_order, r.max_finite_order == bound))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub n_doublets: usize,
    pub order_bound: u64,
    pub realized: Vec<GroupSignature>,
    pub not_found: Vec<GroupSignature>,
}

/// Which abstract finite abelian groups of order at most `2^(N−1)` turn up
/// in the classification. Informational only.
pub fn probe_conjecture(n_doublets: usize) -> Result<ConjectureReport> {
    check_range(n_doublets, 5)?;
    let found = classify(n_doublets, false)?.signatures();
    let order_bound = 1u64 << (n_doublets - 1);
    let (realized, not_found) = (2..=order_bound)
        .flat_map(abelian_groups_of_order)
        .partition(|g| found.contains(g));
    Ok(ConjectureReport {
        n_doublets,
        order_bound,
        realized,
        not_found,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Realized {
        signature: GroupSignature,
        monomials: Vec<Monomial>,
        generators: Vec<PhaseVector>,
        text: String,
    },
    NotRealizable {
        signature: GroupSignature,
    },
}

/// Potential text: the backbone plus the witness monomials with generic
/// complex coefficients.
pub fn render_potential(monomials: &[Monomial], n_doublets: usize, style: RenderStyle) -> String {
    let mut text = format!("V = V0 + V1\nV0 = {}\n", backbone_text(n_doublets, style));
    let charged: Vec<String> = monomials
        .iter()
        .map(|m| {
            let name = m.term().coefficient_name();
            let name = match style {
                RenderStyle::Unicode => name,
                RenderStyle::Ascii => name.replace('λ', "lam"),
            };
            format!("{} {}", name, m.render(style))
        })
        .collect();
    if charged.is_empty() {
        text.push_str("V1 = 0\n");
    } else {
        text.push_str(&format!("V1 = {} + h.c.\n", charged.join(" + ")));
    }
    text
}

pub fn witness_potential(g: &GroupSignature, n_doublets: usize) -> Result<WitnessOutcome> {
    let r = classify(n_doublets, true)?;
    Ok(match r.entries.into_iter().find(|e| &e.signature == g) {
        Some(e) => WitnessOutcome::Realized {
            signature: e.signature,
            text: render_potential(&e.witness, n_doublets, RenderStyle::Unicode),
            monomials: e.witness,
            generators: e.generators,
        },
        None => WitnessOutcome::NotRealizable {
            signature: g.clone(),
        },
    })
}
