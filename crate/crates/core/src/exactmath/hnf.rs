use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

fn sub_scaled(dst: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= s * q;
    }
}

/// Row-style Hermite normal form of the row lattice: positive pivots moving
/// strictly right, entries above each pivot reduced into `[0, pivot)`, zero
/// rows dropped. Equal lattices give equal output.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let cols = m.cols();
    let mut rows = m.row_vecs();
    let mut k = 0;
    for j in 0..cols {
        if k == rows.len() {
            break;
        }
        loop {
            let best = (k..rows.len())
                .filter(|&i| !rows[i][j].is_zero())
                .min_by(|&x, &y| rows[x][j].abs().cmp(&rows[y][j].abs()));
            let Some(p) = best else { break };
            rows.swap(k, p);
            let mut done = true;
            for i in k + 1..rows.len() {
                if rows[i][j].is_zero() {
                    continue;
                }
                let q = rows[i][j].div_floor(&rows[k][j]);
                let (head, tail) = rows.split_at_mut(i);
                sub_scaled(&mut tail[0], &head[k], &q);
                done &= tail[0][j].is_zero();
            }
            if done {
                break;
            }
        }
        if rows[k][j].is_zero() {
            continue;
        }
        if rows[k][j].is_negative() {
            for e in rows[k].iter_mut() {
                *e = -std::mem::take(e);
            }
        }
        for i in 0..k {
            let q = rows[i][j].div_floor(&rows[k][j]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = rows.split_at_mut(k);
            sub_scaled(&mut head[i], &tail[0], &q);
        }
        k += 1;
    }
    rows.truncate(k);
    IntMatrix::from_rows_with_cols(cols, rows).expect("row lengths are preserved")
}

/// Membership of `v` in the row lattice of a matrix already in HNF.
pub fn hnf_contains(h: &IntMatrix, v: &[BigInt]) -> bool {
    let mut rest = v.to_vec();
    for i in 0..h.rows() {
        let row = h.row(i);
        let j = row
            .iter()
            .position(|x| !x.is_zero())
            .expect("hnf rows are nonzero");
        // Entries left of this pivot must already be cleared.
        if rest[..j].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, r) = rest[j].div_rem(&row[j]);
        if !r.is_zero() {
            return false;
        }
        sub_scaled(&mut rest, row, &q);
    }
    rest.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_examples() {
        let m = IntMatrix::from_rows([[2, 0], [0, 2]]).unwrap();
        assert_eq!(hnf(&m), m);
        let m = IntMatrix::from_rows([[1, 1], [0, 0]]).unwrap();
        assert_eq!(hnf(&m), IntMatrix::from_rows([[1, 1]]).unwrap());
    }

    #[test]
    fn same_lattice_same_form() {
        let a = IntMatrix::from_rows([[3, 2], [-3, -1]]).unwrap();
        let b = IntMatrix::from_rows([[0, 1], [3, 2]]).unwrap();
        assert_eq!(hnf(&a), hnf(&b));
        assert_eq!(hnf(&a), IntMatrix::from_rows([[3, 0], [0, 1]]).unwrap());
    }

    #[test]
    fn membership() {
        let h = hnf(&IntMatrix::from_rows([[2, 1], [0, 3]]).unwrap());
        let v = |a: i64, b: i64| [BigInt::from(a), BigInt::from(b)];
        assert!(hnf_contains(&h, &v(2, 4)));
        assert!(hnf_contains(&h, &v(0, -3)));
        assert!(!hnf_contains(&h, &v(1, 0)));
        assert!(!hnf_contains(&h, &v(0, 1)));
    }
}
