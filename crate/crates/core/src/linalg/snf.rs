//! Smith normal form with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal in divisibility order.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// The `min(rows, cols)` diagonal entries of `D`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_one()).collect()
    }
}

/// Position of the nonzero entry of least absolute value in the trailing block.
fn min_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().map_or(true, |(_, b)| ax < *b) {
                let done = ax.is_one();
                best = Some(((i, j), ax));
                if done {
                    return best.map(|b| b.0);
                }
            }
        }
    }
    best.map(|b| b.0)
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_pivot(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            // clear column t below the pivot
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                let nq = -q;
                a.add_row_multiple(i, t, &nq);
                u.add_row_multiple(i, t, &nq);
                if !a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                let nq = -q;
                a.add_col_multiple(j, t, &nq);
                v.add_col_multiple(j, t, &nq);
                if !a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a remainder smaller than the pivot appeared; move it to (t, t)
                let (pi, pj) = smaller_in_cross(&a, t);
                a.swap_rows(t, pi);
                u.swap_rows(t, pi);
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // row and column are clear; enforce divisibility of the trailing block
            let p = a[(t, t)].clone();
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&p));
            match bad {
                Some((i, _)) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    SnfResult { d: a, u, v }
}

/// Least nonzero |entry| among column t (rows ≥ t) and row t (cols ≥ t).
fn smaller_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut best_abs = a[(t, t)].abs();
    for i in t + 1..a.rows() {
        let x = a[(i, t)].abs();
        if !x.is_zero() && (best_abs.is_zero() || x < best_abs) {
            best = (i, t);
            best_abs = x;
        }
    }
    for j in t + 1..a.cols() {
        let x = a[(t, j)].abs();
        if !x.is_zero() && (best_abs.is_zero() || x < best_abs) {
            best = (t, j);
            best_abs = x;
        }
    }
    best
}

/// Nontrivial (≠ 1) diagonal entries of the Smith form, in divisibility order.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    smith_normal_form(m).invariant_factors()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SnfResult {
        let r = smith_normal_form(m);
        assert_eq!(r.u.mul(m).mul(&r.v), r.d);
        assert!(r.u.det().unwrap().abs().is_one());
        assert!(r.v.det().unwrap().abs().is_one());
        let diag = r.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        for i in 0..r.d.rows() {
            for j in 0..r.d.cols() {
                if i != j {
                    assert!(r.d[(i, j)].is_zero());
                }
            }
        }
        r
    }

    #[test]
    fn coprime_diagonal_merges() {
        let r = check(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(r.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix() {
        let r = check(&IntMatrix::zeros(2, 2));
        assert_eq!(r.diagonal(), vec![BigInt::zero(), BigInt::zero()]);
    }

    #[test]
    fn trefoil_cover() {
        let m = IntMatrix::from_rows(&[[-2, 1], [1, -2]]);
        check(&m);
        assert_eq!(invariant_factors(&m), vec![BigInt::from(3)]);
    }

    #[test]
    fn identity_has_no_factors() {
        assert!(invariant_factors(&IntMatrix::identity(4)).is_empty());
    }

    #[test]
    fn rectangular() {
        let m = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
        let r = check(&m);
        assert_eq!(
            r.diagonal(),
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
        let m = IntMatrix::from_rows(&[[6, 4, 0], [0, 10, 15]]);
        check(&m);
        check(&m.transpose());
    }

    #[test]
    fn divisibility_fixup() {
        // diag(4, 6) has the same pivots but needs the divisibility pass
        let r = check(&IntMatrix::from_rows(&[[4, 0], [0, 6]]));
        assert_eq!(r.diagonal(), vec![BigInt::from(2), BigInt::from(12)]);
    }
}
