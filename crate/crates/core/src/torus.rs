//! The maximal torus of PSU(N): diagonal phase rotations, its angle basis,
//! and equality modulo scalar phases.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::lattice::frac;

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Diagonal transformation `diag(e^{2πi p_1}, …)`, phases in units of 2π,
/// stored reduced into `[0, 1)`.
///
/// Any representative of the class modulo scalar phases is accepted; use
/// [`PhaseVector::is_special_unitary`] to test the determinant condition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhaseVector {
    #[serde(with = "crate::serde_util::rational_vec")]
    phases: Vec<BigRational>,
}

impl PhaseVector {
    pub fn new(phases: Vec<BigRational>) -> Self {
        PhaseVector {
            phases: phases.iter().map(frac).collect(),
        }
    }

    /// From `(numerator, denominator)` pairs.
    pub fn from_ratios(pairs: &[(i64, i64)]) -> Self {
        Self::new(pairs.iter().map(|&(n, d)| rational(n, d)).collect())
    }

    pub fn identity(n: usize) -> Self {
        PhaseVector {
            phases: vec![BigRational::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[BigRational] {
        &self.phases
    }

    pub fn is_special_unitary(&self) -> bool {
        let s: BigRational = self.phases.iter().sum();
        s.is_integer()
    }

    /// `k`-fold power.
    pub fn pow(&self, k: &BigInt) -> Self {
        let k = BigRational::from_integer(k.clone());
        Self::new(self.phases.iter().map(|p| p * &k).collect())
    }

    /// All phases equal, i.e. a scalar matrix.
    pub fn is_central(&self) -> bool {
        self.phases.windows(2).all(|w| w[0] == w[1])
    }

    /// Representative with first phase zero; equal for center-equivalent vectors.
    pub fn center_normalized(&self) -> Self {
        match self.phases.first() {
            None => self.clone(),
            Some(p0) => Self::new(self.phases.iter().map(|p| p - p0).collect()),
        }
    }

    /// Order in PSU(N).
    pub fn order_mod_center(&self) -> BigInt {
        self.center_normalized()
            .phases
            .iter()
            .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()))
    }

    /// Value of the character `m` (per-doublet exponents) on this element,
    /// reduced mod 1. Well defined mod center when `m` sums to zero.
    pub fn character(&self, m: &[i64]) -> BigRational {
        assert_eq!(m.len(), self.len(), "exponent vector length");
        frac(
            &self
                .phases
                .iter()
                .zip(m)
                .map(|(p, &k)| p * BigRational::from_integer(k.into()))
                .sum::<BigRational>(),
        )
    }

    pub fn equal_mod_center(&self, other: &PhaseVector) -> Result<bool> {
        if self.len() != other.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok((self - other).is_central())
    }
}

/// True iff `x − y` is a scalar phase vector.
pub fn equal_mod_center(x: &PhaseVector, y: &PhaseVector) -> Result<bool> {
    x.equal_mod_center(y)
}

impl Add for &PhaseVector {
    type Output = PhaseVector;

    fn add(self, rhs: &PhaseVector) -> PhaseVector {
        assert_eq!(self.len(), rhs.len(), "phase vector lengths differ");
        PhaseVector::new(
            self.phases
                .iter()
                .zip(&rhs.phases)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &PhaseVector {
    type Output = PhaseVector;

    fn sub(self, rhs: &PhaseVector) -> PhaseVector {
        self + &(-rhs)
    }
}

impl Neg for &PhaseVector {
    type Output = PhaseVector;

    fn neg(self) -> PhaseVector {
        PhaseVector::new(self.phases.iter().map(|p| -p).collect())
    }
}

impl fmt::Display for PhaseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2π·(")?;
        for (i, p) in self.phases.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// The `N−1` generating circles of the torus. Vector `k < N−2` (0-based) is
/// `(−(k+1), 1, …, 1, 0, …)`; the last one is divided by `N` so that the map
/// from angles to PSU(N) is injective on `[0,1)^{N−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusBasis {
    n_doublets: usize,
    #[serde(with = "crate::serde_util::rational_rows")]
    vectors: Vec<Vec<BigRational>>,
}

pub fn torus_basis(n_doublets: usize) -> Result<TorusBasis> {
    TorusBasis::new(n_doublets)
}

impl TorusBasis {
    pub fn new(n_doublets: usize) -> Result<Self> {
        if n_doublets < 2 {
            return Err(Error::DoubletRange(n_doublets));
        }
        let n = n_doublets;
        let int = |x: i64| BigRational::from_integer(x.into());
        let mut vectors = Vec::with_capacity(n - 1);
        for i in 1..n - 1 {
            let mut v = vec![BigRational::zero(); n];
            v[0] = int(-(i as i64));
            for e in v.iter_mut().skip(1).take(i) {
                *e = int(1);
            }
            vectors.push(v);
        }
        let mut last = vec![rational(1, n as i64); n];
        last[0] = rational(-(n as i64 - 1), n as i64);
        vectors.push(last);
        Ok(TorusBasis {
            n_doublets: n,
            vectors,
        })
    }

    pub fn n_doublets(&self) -> usize {
        self.n_doublets
    }

    /// Number of angles, `N − 1`.
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<BigRational>] {
        &self.vectors
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found == self.dim() {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.dim(),
                found,
            })
        }
    }

    /// Unreduced phase combination `Σ angles_k · u_k`.
    pub fn direction(&self, angles: &[BigRational]) -> Result<Vec<BigRational>> {
        self.check_len(angles.len())?;
        let mut out = vec![BigRational::zero(); self.n_doublets];
        for (a, u) in angles.iter().zip(&self.vectors) {
            for (o, x) in out.iter_mut().zip(u) {
                *o += a * x;
            }
        }
        Ok(out)
    }

    pub fn element_from_angles(&self, angles: &[BigRational]) -> Result<PhaseVector> {
        Ok(PhaseVector::new(self.direction(angles)?))
    }

    /// Inverse of [`Self::element_from_angles`]: angles in `[0,1)` of the
    /// torus element equal to `x` modulo scalars.
    pub fn angles_of(&self, x: &PhaseVector) -> Result<Vec<BigRational>> {
        if x.len() != self.n_doublets {
            return Err(Error::Dimension {
                expected: self.n_doublets,
                found: x.len(),
            });
        }
        let n = self.n_doublets;
        let p = x.phases();
        let total: BigRational = p.iter().sum();
        let mut angles: Vec<BigRational> = (1..n - 1).map(|j| frac(&(&p[j] - &p[j + 1]))).collect();
        let scale = BigRational::from_integer((n as i64).into());
        angles.push(frac(&(&p[n - 1] * scale - total)));
        Ok(angles)
    }

    /// Charge of per-doublet exponents `m` (which must sum to zero): the
    /// coefficient of each angle in the phase picked up, always an integer.
    pub fn charge_of_exponents(&self, m: &[i64]) -> Vec<BigInt> {
        assert_eq!(m.len(), self.n_doublets, "exponent vector length");
        debug_assert_eq!(m.iter().sum::<i64>(), 0, "exponents must sum to zero");
        self.vectors
            .iter()
            .map(|u| {
                let c: BigRational = u
                    .iter()
                    .zip(m)
                    .map(|(x, &k)| x * BigRational::from_integer(k.into()))
                    .sum();
                assert!(c.is_integer(), "charge is integral for balanced exponents");
                c.to_integer()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_doublet_basis() {
        let b = torus_basis(3).unwrap();
        assert_eq!(
            b.vectors()[0],
            vec![rational(-1, 1), rational(1, 1), rational(0, 1)]
        );
        assert_eq!(
            b.vectors()[1],
            vec![rational(-2, 3), rational(1, 3), rational(1, 3)]
        );
        assert!(torus_basis(1).is_err());
    }

    #[test]
    fn solved_z3_angles() {
        let b = torus_basis(3).unwrap();
        let g = b
            .element_from_angles(&[rational(1, 3), rational(0, 1)])
            .unwrap();
        assert_eq!(g, PhaseVector::from_ratios(&[(2, 3), (1, 3), (0, 1)]));
        assert_eq!(
            b.angles_of(&g).unwrap(),
            vec![rational(1, 3), rational(0, 1)]
        );
        assert!(b.element_from_angles(&[rational(1, 3)]).is_err());
    }

    #[test]
    fn center_equivalence() {
        let x = PhaseVector::from_ratios(&[(0, 1), (0, 1), (1, 2)]);
        let y = PhaseVector::from_ratios(&[(1, 2), (1, 2), (0, 1)]);
        assert!(equal_mod_center(&x, &y).unwrap());
        let c = PhaseVector::from_ratios(&[(1, 3), (1, 3), (1, 3)]);
        assert!(equal_mod_center(&c, &PhaseVector::identity(3)).unwrap());
        assert!(equal_mod_center(&c, &PhaseVector::identity(2)).is_err());
        assert_eq!(y.order_mod_center(), BigInt::from(2));
    }

    #[test]
    fn display_uses_turns() {
        let x = PhaseVector::from_ratios(&[(2, 3), (1, 3), (0, 1)]);
        assert_eq!(x.to_string(), "2π·(2/3, 1/3, 0)");
    }
}
