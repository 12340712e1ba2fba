//! Integer kernels, inverses and linear congruences built on the Smith form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{snf, IntMatrix};

/// Reduces a rational into `[0, 1)`.
pub fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

pub fn is_integer(q: &BigRational) -> bool {
    q.denom().is_one()
}

pub fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect()
}

/// Z-basis (as rows) of `{ y : y * m = 0 }`.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let s = snf(m);
    let rank = s.rank();
    let rows = (rank..m.rows()).map(|i| s.u.row(i).to_vec());
    IntMatrix::from_rows_with_cols(m.rows(), rows).expect("rows of u have full width")
}

/// Inverse of a square matrix with determinant ±1.
pub fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    if !m.is_square() {
        return None;
    }
    let s = snf(m);
    if s.d.iter().any(|x| !x.is_one()) {
        return None;
    }
    // u m v = 1  =>  m^-1 = v u
    Some(&s.v * &s.u)
}

fn rational_mat_vec(m: &IntMatrix, v: &[BigRational]) -> Vec<BigRational> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .filter(|(a, _)| !a.is_zero())
                .map(|(a, b)| b * BigRational::from_integer(a.clone()))
                .fold(BigRational::zero(), |acc, x| acc + x)
        })
        .collect()
}

/// Some rational `x` with `m x = rhs` exactly.
pub fn solve_exact(m: &IntMatrix, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(rhs.len(), m.rows(), "rhs length must match row count");
    let s = snf(m);
    let w = rational_mat_vec(&s.u, rhs);
    let mut y = vec![BigRational::zero(); m.cols()];
    for (i, wi) in w.iter().enumerate() {
        match s.d.get(i).filter(|d| !d.is_zero()) {
            Some(d) => y[i] = wi / BigRational::from_integer(d.clone()),
            None if !wi.is_zero() => return None,
            None => {}
        }
    }
    Some(rational_mat_vec(&s.v, &y))
}

/// Some rational `x` with `m x ≡ rhs (mod Z^rows)`.
pub fn solve_mod_one(m: &IntMatrix, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(rhs.len(), m.rows(), "rhs length must match row count");
    let s = snf(m);
    let w = rational_mat_vec(&s.u, rhs);
    let mut y = vec![BigRational::zero(); m.cols()];
    for (i, wi) in w.iter().enumerate() {
        match s.d.get(i).filter(|d| !d.is_zero()) {
            Some(d) => y[i] = frac(wi) / BigRational::from_integer(d.clone()),
            None if !is_integer(wi) => return None,
            None => {}
        }
    }
    Some(rational_mat_vec(&s.v, &y).iter().map(frac).collect())
}

/// Integer solution of `y * m = target` for a matrix of full row rank.
pub fn solve_left_integer(m: &IntMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = snf(&m.transpose());
    // m^T y^T = target^T ;  u m^T v = D
    let w = s.u.apply(target);
    let mut z = vec![BigInt::zero(); m.rows()];
    for (i, wi) in w.iter().enumerate() {
        match s.d.get(i).filter(|d| !d.is_zero()) {
            Some(d) => {
                let (q, r) = wi.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            }
            None if !wi.is_zero() => return None,
            None => {}
        }
    }
    Some(s.v.apply(&z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = IntMatrix::from_rows([[1, 2], [2, 4], [0, 0]]).unwrap();
        let k = left_kernel(&m);
        assert_eq!(k.rows(), 2);
        assert!((&k * &m).is_zero());
    }

    #[test]
    fn inverse_of_unimodular() {
        let m = IntMatrix::from_rows([[2, 1], [1, 1]]).unwrap();
        let inv = unimodular_inverse(&m).unwrap();
        assert_eq!(&m * &inv, IntMatrix::identity(2));
        assert!(unimodular_inverse(&IntMatrix::from_rows([[2, 0], [0, 1]]).unwrap()).is_none());
    }

    #[test]
    fn congruences() {
        let m = IntMatrix::from_rows([[2, 0], [0, 0]]).unwrap();
        let x = solve_mod_one(&m, &[q(1, 3), q(5, 1)]).unwrap();
        assert_eq!(frac(&(&x[0] * q(2, 1))), q(1, 3));
        assert!(solve_mod_one(&m, &[q(0, 1), q(1, 2)]).is_none());
        assert!(solve_exact(&m, &[q(0, 1), q(5, 1)]).is_none());
        assert_eq!(solve_exact(&m, &[q(1, 1), q(0, 1)]).unwrap()[0], q(1, 2));
    }

    #[test]
    fn left_integer_solve() {
        let m = IntMatrix::from_rows([[1, 1, 0], [0, 2, 2]]).unwrap();
        let t: Vec<BigInt> = [3, 7, 4].iter().map(|&x| BigInt::from(x)).collect();
        let y = solve_left_integer(&m, &t).unwrap();
        assert_eq!(m.left_apply(&y), t);
        let t: Vec<BigInt> = [0, 1, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert!(solve_left_integer(&m, &t).is_none());
    }
}
