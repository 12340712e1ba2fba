use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::Result;
use crate::exactmath::lattice::unimodular_inverse;
use crate::exactmath::{det, hnf, hnf_contains, snf, IntMatrix};
use crate::groups::{group_from_snf, GroupSignature};
use crate::monomials::{a_matrix, charge_vector, enumerate_monomials};
use crate::torus::TorusBasis;

/// A charge lattice in Hermite form together with a smallest set of
/// monomials (indices into [`enumerate_monomials`]) generating it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeRecord {
    pub lattice: IntMatrix,
    pub witness: Vec<usize>,
}

fn witness_order(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn extend(lattice: &IntMatrix, charge: &[BigInt]) -> IntMatrix {
    let mut rows = lattice.row_vecs();
    rows.push(charge.to_vec());
    hnf(&IntMatrix::from_rows_with_cols(lattice.cols(), rows).expect("same width"))
}

/// Every lattice spanned by some set of monomial charges, found level by
/// level; a lattice first met at level `k` needs exactly `k` monomials.
pub fn lattice_closure(n_doublets: usize) -> Result<Vec<LatticeRecord>> {
    let basis = TorusBasis::new(n_doublets)?;
    let charges: Vec<Vec<BigInt>> = enumerate_monomials(n_doublets)
        .iter()
        .map(|m| charge_vector(m, &basis).0)
        .collect();
    let root = IntMatrix::zeros(0, basis.dim());
    let mut seen: HashMap<IntMatrix, Vec<usize>> = HashMap::new();
    seen.insert(root.clone(), Vec::new());
    let mut frontier = vec![(root, Vec::new())];
    while !frontier.is_empty() {
        let found: Vec<(IntMatrix, Vec<usize>)> = frontier
            .par_iter()
            .flat_map_iter(|(lattice, witness): &(IntMatrix, Vec<usize>)| {
                charges.iter().enumerate().filter_map(move |(i, c)| {
                    if hnf_contains(lattice, c) {
                        return None;
                    }
                    let mut w = witness.clone();
                    w.push(i);
                    w.sort_unstable();
                    Some((extend(lattice, c), w))
                })
            })
            .collect();
        let mut level: HashMap<IntMatrix, Vec<usize>> = HashMap::new();
        for (lattice, w) in found {
            if seen.contains_key(&lattice) {
                continue;
            }
            level
                .entry(lattice)
                .and_modify(|old| {
                    if witness_order(&w, old).is_lt() {
                        *old = w.clone();
                    }
                })
                .or_insert(w);
        }
        let mut next: Vec<(IntMatrix, Vec<usize>)> = level.into_iter().collect();
        next.sort_by(|a, b| witness_order(&a.1, &b.1));
        for (l, w) in &next {
            seen.insert(l.clone(), w.clone());
        }
        frontier = next;
    }
    let mut out: Vec<LatticeRecord> = seen
        .into_iter()
        .map(|(lattice, witness)| LatticeRecord { lattice, witness })
        .collect();
    out.sort_by(|a, b| witness_order(&a.witness, &b.witness));
    Ok(out)
}

/// Finite groups of all nonsingular `(N−1)`-subsets of monomials.
pub fn subset_scan(n_doublets: usize) -> Result<BTreeSet<GroupSignature>> {
    let basis = TorusBasis::new(n_doublets)?;
    let charges: Vec<Vec<BigInt>> = enumerate_monomials(n_doublets)
        .iter()
        .map(|m| charge_vector(m, &basis).0)
        .collect();
    let dim = basis.dim();
    let subsets: Vec<Vec<usize>> = (0..charges.len()).combinations(dim).collect();
    let groups: Vec<GroupSignature> = subsets
        .par_iter()
        .filter_map(|idx| {
            let x = IntMatrix::from_rows_with_cols(dim, idx.iter().map(|&i| charges[i].clone()))
                .expect("same width");
            if det(&x).expect("square").is_zero() {
                return None;
            }
            Some(group_from_snf(&snf(&x).d, dim).expect("small factors"))
        })
        .collect();
    Ok(groups.into_iter().filter(|g| !g.is_trivial()).collect())
}

/// Relabels the doublets of a charge lattice: the character with exponents
/// `m` goes to the one with `m'[perm[j]] = m[j]`.
pub(crate) struct Relabeller {
    basis: TorusBasis,
    a_inverse: IntMatrix,
}

impl Relabeller {
    pub fn new(basis: &TorusBasis) -> Self {
        let a = a_matrix(basis.n_doublets()).expect("valid doublet count");
        Relabeller {
            basis: basis.clone(),
            a_inverse: unimodular_inverse(&a).expect("A has determinant 1"),
        }
    }

    fn exponents(&self, charge: &[BigInt]) -> Vec<i64> {
        let c = self.a_inverse.left_apply(charge);
        let mut m = vec![0i64; self.basis.n_doublets()];
        for (i, ci) in c.iter().enumerate() {
            let ci = i64::try_from(ci).expect("small charges");
            m[i + 1] += ci;
            m[0] -= ci;
        }
        m
    }

    pub fn relabel(&self, lattice: &IntMatrix, perm: &[usize]) -> IntMatrix {
        let rows = (0..lattice.rows()).map(|i| {
            let m = self.exponents(lattice.row(i));
            let mut moved = vec![0i64; m.len()];
            for (j, &x) in m.iter().enumerate() {
                moved[perm[j]] = x;
            }
            self.basis.charge_of_exponents(&moved)
        });
        hnf(&IntMatrix::from_rows_with_cols(lattice.cols(), rows).expect("same width"))
    }
}
