//! Explicit `c` matrices realizing `Z_p` and products of cyclic groups,
//! each row turned back into a concrete monomial so the construction comes
//! with a witness potential.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::classifier::symmetry_group_of_terms;
use crate::error::{Error, Result};
use crate::exactmath::{det, snf, IntMatrix};
use crate::groups::{group_from_snf, GroupSignature};
use crate::monomials::{a_matrix, build_x_matrix, classify_row, Monomial, RowType};
use crate::torus::TorusBasis;

/// Largest block size accepted by the builders.
pub const MAX_CONSTRUCT_N: usize = 16;

/// Square integer matrix whose rows are all of the nine admissible shapes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CMatrix {
    matrix: IntMatrix,
    row_types: Vec<RowType>,
}

impl CMatrix {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let row_types: Vec<RowType> = (0..matrix.rows())
            .map(|i| classify_row(matrix.row(i)))
            .collect();
        if let Some(i) = row_types.iter().position(|t| !t.is_valid()) {
            let row: Vec<String> = matrix.row(i).iter().map(ToString::to_string).collect();
            return Err(Error::Unsupported(format!(
                "row {} ({}) is not a monomial charge pattern",
                i + 1,
                row.join(",")
            )));
        }
        Ok(CMatrix { matrix, row_types })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn row_types(&self) -> &[RowType] {
        &self.row_types
    }

    /// Number of rows, i.e. `N − 1`.
    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn det(&self) -> BigInt {
        det(&self.matrix).expect("square by construction")
    }

    pub fn smith_diagonal(&self) -> Vec<BigInt> {
        snf(&self.matrix).d
    }

    pub fn group(&self) -> Result<GroupSignature> {
        group_from_snf(&self.smith_diagonal(), self.size())
    }

    /// One monomial per row with charge exactly `row · A` in the
    /// `(size+1)`-doublet model. Row `r` asks for net doublet powers
    /// `(−Σr, r_1, …, r_n)`; daggered and plain indices are paired in
    /// increasing order.
    pub fn realize(&self) -> Vec<Monomial> {
        (0..self.size())
            .map(|i| row_monomial(self.matrix.row(i)))
            .collect()
    }
}

fn row_monomial(row: &[BigInt]) -> Monomial {
    let mut powers = Vec::with_capacity(row.len() + 1);
    let total: BigInt = row.iter().sum();
    powers.push(-total);
    powers.extend(row.iter().cloned());
    let mut daggered = Vec::new();
    let mut plain = Vec::new();
    for (i, p) in powers.iter().enumerate() {
        let k = p.abs().to_usize().expect("row entries are small");
        let side = if p.is_negative() {
            &mut daggered
        } else {
            &mut plain
        };
        side.extend(std::iter::repeat_n(i, k));
    }
    let factors = daggered.into_iter().zip(plain).collect();
    Monomial::new(factors).expect("admissible rows give charged monomials")
}

/// The `n×n` matrix with 2 on the diagonal and −1 just above it.
fn power_of_two_block(n: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, 2.into());
        if i + 1 < n {
            m.set(i, i + 1, (-1).into());
        }
    }
    m
}

fn check_size(n: usize) -> Result<()> {
    if (1..=MAX_CONSTRUCT_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::Partition(format!(
            "block size {n} outside 1..={MAX_CONSTRUCT_N}"
        )))
    }
}

/// Block realizing `Z_p`: subtract the binary digits of `2^n − p` from the
/// first column, most significant digit in the top row.
pub fn cyclic_c_matrix(p: u64, n: usize) -> Result<CMatrix> {
    check_size(n)?;
    let max = 1u64 << n;
    if !(1..=max).contains(&p) {
        return Err(Error::OrderRange { p, max });
    }
    let q = max - p;
    let mut m = power_of_two_block(n);
    for i in 0..n {
        if (q >> (n - 1 - i)) & 1 == 1 {
            let v = m.get(i, 0) - 1;
            m.set(i, 0, v);
        }
    }
    CMatrix::new(m)
}

/// How one block's order sits against its bound `2^{n_i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockBound {
    /// `p_i < 2^{n_i}`.
    Strict,
    /// `p_i = 2^{n_i}`, the unmodified block.
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductBlock {
    pub size: usize,
    pub order: u64,
    pub bound: BlockBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductConstruction {
    pub c: CMatrix,
    pub blocks: Vec<ProductBlock>,
}

/// Block-diagonal assembly of cyclic blocks. Zero-size parts are allowed
/// and must carry order 1.
pub fn product_c_matrix(partition: &[usize], orders: &[u64]) -> Result<ProductConstruction> {
    if partition.len() != orders.len() {
        return Err(Error::Partition(format!(
            "{} block sizes but {} orders",
            partition.len(),
            orders.len()
        )));
    }
    let n: usize = partition.iter().sum();
    check_size(n)?;
    let mut mats = Vec::new();
    let mut blocks = Vec::new();
    for (&size, &order) in partition.iter().zip(orders) {
        if size == 0 {
            if order != 1 {
                return Err(Error::OrderRange { p: order, max: 1 });
            }
            continue;
        }
        let block = cyclic_c_matrix(order, size)?;
        let bound = if order == 1u64 << size {
            BlockBound::Boundary
        } else {
            BlockBound::Strict
        };
        mats.push(block.matrix);
        blocks.push(ProductBlock { size, order, bound });
    }
    Ok(ProductConstruction {
        c: CMatrix::new(IntMatrix::block_diagonal(&mats))?,
        blocks,
    })
}

/// Result of feeding a construction's witness monomials back through the
/// charge machinery.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionCheck {
    pub n_doublets: usize,
    pub group: GroupSignature,
    pub witness: Vec<Monomial>,
    /// `X` built from the witness equals `c·A`.
    pub charges_match: bool,
    /// Group of the witness potential, if it was recomputed.
    pub potential_group: Option<GroupSignature>,
}

impl ConstructionCheck {
    pub fn consistent(&self) -> bool {
        self.charges_match
            && self
                .potential_group
                .as_ref()
                .is_none_or(|g| *g == self.group)
    }
}

/// Checks `X = c·A` for the realized monomials and, for at most
/// `recompute_up_to` rows, recomputes the group from the potential.
pub fn check_construction(c: &CMatrix, recompute_up_to: usize) -> Result<ConstructionCheck> {
    let n_doublets = c.size() + 1;
    let basis = TorusBasis::new(n_doublets)?;
    let witness = c.realize();
    let x = build_x_matrix(&witness, &basis);
    let ca = c
        .matrix()
        .checked_mul(&a_matrix(n_doublets)?)
        .expect("square shapes");
    let group = c.group()?;
    let potential_group = if c.size() <= recompute_up_to {
        Some(
            symmetry_group_of_terms(&witness, &basis)?
                .signature()
                .clone(),
        )
    } else {
        None
    };
    Ok(ConstructionCheck {
        n_doublets,
        group,
        witness,
        charges_match: x == ca,
        potential_group,
    })
}

/// `|det c|` as a plain integer, when it fits.
pub fn order_of(c: &CMatrix) -> Option<u64> {
    let d = c.det();
    if d.is_zero() {
        None
    } else {
        d.abs().to_u64()
    }
}
