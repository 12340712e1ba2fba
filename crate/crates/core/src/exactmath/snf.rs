use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::IntMatrix;

/// `u * m * v == diag(d)` with `u`, `v` unimodular and `d` a divisibility
/// chain of non-negative entries, zeros last. `d` has `min(rows, cols)` slots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub d: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn diagonal_matrix(&self) -> IntMatrix {
        IntMatrix::diagonal(self.u.rows(), self.v.cols(), &self.d)
    }
}

/// Position of the smallest nonzero |entry| in the block `[t.., t..]`,
/// first in row-major order on ties.
fn pivot_position(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let e = a.get(i, j);
            if e.is_zero() {
                continue;
            }
            let mag = e.abs();
            if best.as_ref().is_none_or(|(_, _, b)| mag < *b) {
                best = Some((i, j, mag));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn snf(m: &IntMatrix) -> SnfResult {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let one = BigInt::one();

    for t in 0..r.min(c) {
        let Some((pi, pj)) = pivot_position(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let p = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..r {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -a.get(i, t).div_floor(&p);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..c {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -a.get(t, j).div_floor(&p);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                let (pi, pj) = pivot_position(&a, t).expect("remainder is nonzero");
                a.swap_rows(t, pi);
                u.swap_rows(t, pi);
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // Pivot must divide the rest of the block; otherwise fold an
            // offending row into the pivot row and reduce again.
            let offender =
                (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    let d = (0..r.min(c)).map(|i| a.get(i, i).clone()).collect();
    SnfResult { d, u, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SnfResult {
        let s = snf(m);
        assert_eq!(&(&s.u * m) * &s.v, s.diagonal_matrix());
        s
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn worked_three_by_two() {
        let m = IntMatrix::from_rows([[3, 2], [-3, -1]]).unwrap();
        assert_eq!(check(&m).d, ints(&[1, 3]));
    }

    #[test]
    fn identity_and_small_cases() {
        assert_eq!(check(&IntMatrix::identity(3)).d, ints(&[1, 1, 1]));
        let m = IntMatrix::from_rows([[0, 1], [4, 2]]).unwrap();
        assert_eq!(check(&m).d, ints(&[1, 4]));
        let m = IntMatrix::from_rows([[2, 0], [0, 3]]).unwrap();
        assert_eq!(check(&m).d, ints(&[1, 6]));
        let m = IntMatrix::from_rows([[-2, 0]]).unwrap();
        assert_eq!(check(&m).d, ints(&[2]));
    }

    #[test]
    fn rank_deficient_and_empty() {
        let m = IntMatrix::from_rows([[2, 4], [1, 2]]).unwrap();
        let s = check(&m);
        assert_eq!(s.d, ints(&[1, 0]));
        assert_eq!(s.rank(), 1);
        let s = check(&IntMatrix::zeros(0, 2));
        assert!(s.d.is_empty());
        assert_eq!(s.v, IntMatrix::identity(2));
    }
}
