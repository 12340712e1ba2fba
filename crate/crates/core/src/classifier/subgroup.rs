use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactmath::lattice::{frac, left_kernel};
use crate::exactmath::{hnf, hnf_contains, snf, IntMatrix};
use crate::groups::{group_from_snf, GroupSignature};
use crate::monomials::{build_x_matrix, Monomial};
use crate::torus::{PhaseVector, TorusBasis};

/// Largest cyclic order for which generators are normalized by search.
const NORMALIZE_LIMIT: u64 = 100_000;

/// A closed subgroup of the torus, given as the annihilator of a lattice of
/// charges (torus-angle coordinates). Carries a generator for each cyclic
/// factor and the directions of its identity component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusSubgroup {
    basis: TorusBasis,
    lattice: IntMatrix,
    signature: GroupSignature,
    generators: Vec<PhaseVector>,
    generator_orders: Vec<u64>,
    #[serde(with = "crate::serde_util::rational_rows")]
    directions: Vec<Vec<BigRational>>,
}

/// The generator of the same cyclic subgroup with lexicographically
/// smallest angles.
fn lex_min_generator(angles: &[BigRational], order: u64) -> Vec<BigRational> {
    let at = |k: u64| -> Vec<BigRational> {
        let k = BigRational::from_integer(k.into());
        angles.iter().map(|a| frac(&(a * &k))).collect()
    };
    if order > NORMALIZE_LIMIT {
        return at(1);
    }
    (1..order)
        .filter(|k| k.gcd(&order) == 1)
        .map(at)
        .min()
        .unwrap_or_else(|| at(1))
}

impl TorusSubgroup {
    /// The subgroup fixing every charge row of `x`.
    pub fn from_charges(basis: &TorusBasis, x: &IntMatrix) -> Result<Self> {
        let n = basis.dim();
        assert_eq!(x.cols(), n, "charges need one column per angle");
        let s = snf(x);
        let signature = group_from_snf(&s.d, n)?;
        let rank = s.rank();
        let mut generators = Vec::new();
        let mut generator_orders = Vec::new();
        for (i, d) in s.d.iter().enumerate().take(rank) {
            if d.is_one() {
                continue;
            }
            let order = d.to_u64().expect("checked by group_from_snf");
            let dq = BigRational::from_integer(d.clone());
            let angles: Vec<BigRational> =
                s.v.column(i)
                    .into_iter()
                    .map(|c| frac(&(BigRational::from_integer(c) / &dq)))
                    .collect();
            let angles = lex_min_generator(&angles, order);
            generators.push(basis.element_from_angles(&angles)?);
            generator_orders.push(order);
        }
        let directions = (rank..n)
            .map(|i| {
                let col: Vec<BigRational> =
                    s.v.column(i)
                        .into_iter()
                        .map(BigRational::from_integer)
                        .collect();
                basis.direction(&col)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TorusSubgroup {
            basis: basis.clone(),
            lattice: hnf(x),
            signature,
            generators,
            generator_orders,
            directions,
        })
    }

    pub fn from_terms(basis: &TorusBasis, terms: &[Monomial]) -> Result<Self> {
        Self::from_charges(basis, &build_x_matrix(terms, basis))
    }

    /// Closure of the given finite elements and one-parameter directions
    /// (phase directions, modulo scalars).
    pub fn generated_by(
        basis: &TorusBasis,
        elements: &[PhaseVector],
        directions: &[Vec<BigRational>],
    ) -> Result<Self> {
        let n = basis.dim();
        let mut cols: Vec<Vec<BigRational>> = Vec::new();
        for g in elements {
            cols.push(basis.angles_of(g)?);
        }
        for d in directions {
            cols.push(basis.angles_of_direction(d)?);
        }
        let k_fin = elements.len();
        let denom = cols
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        // Unknowns (x, y): x·(D α_g) − D y_g = 0 for finite generators,
        // x·(D β) = 0 for directions.
        let mut m = IntMatrix::zeros(n + k_fin, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, q) in col.iter().enumerate() {
                let scaled = q * BigRational::from_integer(denom.clone());
                m.set(i, j, scaled.to_integer());
            }
            if j < k_fin {
                m.set(n + j, j, -denom.clone());
            }
        }
        let kernel = left_kernel(&m);
        let x = IntMatrix::from_rows_with_cols(
            n,
            (0..kernel.rows()).map(|i| kernel.row(i)[..n].to_vec()),
        )?;
        Self::from_charges(basis, &hnf(&x))
    }

    pub fn basis(&self) -> &TorusBasis {
        &self.basis
    }

    pub fn n_doublets(&self) -> usize {
        self.basis.n_doublets()
    }

    /// Hermite form of the invariant charge lattice.
    pub fn lattice(&self) -> &IntMatrix {
        &self.lattice
    }

    pub fn signature(&self) -> &GroupSignature {
        &self.signature
    }

    pub fn generators(&self) -> &[PhaseVector] {
        &self.generators
    }

    pub fn generator_orders(&self) -> &[u64] {
        &self.generator_orders
    }

    pub fn directions(&self) -> &[Vec<BigRational>] {
        &self.directions
    }

    pub fn contains(&self, x: &PhaseVector) -> bool {
        let angles = self.basis.angles_of(x).expect("same doublet count");
        (0..self.lattice.rows()).all(|i| {
            let v: BigRational = self
                .lattice
                .row(i)
                .iter()
                .zip(&angles)
                .map(|(c, a)| a * BigRational::from_integer(c.clone()))
                .sum();
            v.is_integer()
        })
    }

    /// Whether the character with per-doublet exponents `m` is trivial on
    /// the subgroup (i.e. a term with these exponents is invariant).
    pub fn fixes_exponents(&self, m: &[i64]) -> bool {
        hnf_contains(&self.lattice, &self.basis.charge_of_exponents(m))
    }

    /// Representatives of the component group, one per element.
    pub fn finite_elements(&self) -> Vec<PhaseVector> {
        let mut out = vec![PhaseVector::identity(self.n_doublets())];
        for (g, &ord) in self.generators.iter().zip(&self.generator_orders) {
            let mut next = Vec::with_capacity(out.len() * ord as usize);
            for x in &out {
                let mut y = x.clone();
                for _ in 0..ord {
                    next.push(y.clone());
                    y = &y + g;
                }
            }
            out = next;
        }
        out
    }

    /// Sizes of the blocks of doublets that every element rotates by the
    /// same phase, largest first.
    pub fn eigenspace_pattern(&self) -> Vec<usize> {
        let n = self.n_doublets();
        let mut block = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        for i in 0..n {
            if block[i] != usize::MAX {
                continue;
            }
            block[i] = sizes.len();
            let mut size = 1;
            for j in i + 1..n {
                let mut m = vec![0; n];
                m[i] = -1;
                m[j] = 1;
                if block[j] == usize::MAX && self.fixes_exponents(&m) {
                    block[j] = sizes.len();
                    size += 1;
                }
            }
            sizes.push(size);
        }
        sizes.sort_by(|a, b| b.cmp(a));
        sizes
    }

    pub fn is_trivial(&self) -> bool {
        self.signature.is_trivial()
    }

    pub fn element_order(&self, x: &PhaseVector) -> BigInt {
        x.order_mod_center()
    }
}

impl TorusBasis {
    /// Angle coordinates of a real phase direction (modulo scalars), without
    /// reduction.
    pub fn angles_of_direction(&self, d: &[BigRational]) -> Result<Vec<BigRational>> {
        let n = self.n_doublets();
        if d.len() != n {
            return Err(crate::Error::Dimension {
                expected: n,
                found: d.len(),
            });
        }
        let total: BigRational = d.iter().sum();
        let mut angles: Vec<BigRational> = (1..n - 1).map(|j| &d[j] - &d[j + 1]).collect();
        angles.push(&d[n - 1] * BigRational::from_integer((n as i64).into()) - total);
        Ok(angles)
    }
}
