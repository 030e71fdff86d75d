//! `det(A - t·B)` by exact interpolation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::bareiss_det;
use super::IntMatrix;
use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Sample points 0, 1, -1, 2, -2, …
fn sample_point(i: usize) -> i64 {
    let k = i.div_ceil(2) as i64;
    if i % 2 == 1 {
        k
    } else {
        -k
    }
}

/// Exact coefficients of `det(A - t·B)`.
///
/// The determinant is sampled at `n + 1` integer points with fraction-free
/// elimination and interpolated by Newton divided differences over ℚ.
pub fn det_linear_pencil(a: &IntMatrix, b: &IntMatrix) -> Result<IntPoly> {
    let n = a.ensure_square()?;
    if b.rows() != n || b.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.rows(),
        });
    }
    let xs: Vec<BigRational> = (0..=n)
        .map(|i| BigRational::from_integer(sample_point(i).into()))
        .collect();
    let mut dd: Vec<BigRational> = (0..=n)
        .map(|i| {
            let t = BigInt::from(sample_point(i));
            let m: Vec<BigInt> = a
                .entries()
                .iter()
                .zip(b.entries())
                .map(|(x, y)| x - &t * y)
                .collect();
            BigRational::from_integer(bareiss_det(m, n))
        })
        .collect();
    for level in 1..=n {
        for i in (level..=n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // Horner on the Newton form
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for k in (0..=n).rev() {
        // coeffs ← coeffs·(t - x_k) + dd[k]
        let mut next = vec![BigRational::zero(); n + 1];
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i < n {
                next[i + 1] += c;
            }
            next[i] -= c * &xs[k];
        }
        next[0] += &dd[k];
        coeffs = next;
    }
    let ints: Option<Vec<BigInt>> = coeffs
        .into_iter()
        .map(|c| c.denom().is_one().then(|| c.to_integer()))
        .collect();
    ints.map(IntPoly::new)
        .ok_or_else(|| Error::Validation("interpolated determinant has non-integer coefficients".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cofactor expansion over integer polynomials, independent of interpolation.
    fn det_poly_cofactor(a: &IntMatrix, b: &IntMatrix) -> IntPoly {
        let n = a.rows();
        let entries: Vec<IntPoly> = a
            .entries()
            .iter()
            .zip(b.entries())
            .map(|(x, y)| IntPoly::new(vec![x.clone(), -y.clone()]))
            .collect();
        fn rec(m: &[IntPoly], n: usize) -> IntPoly {
            if n == 0 {
                return IntPoly::one();
            }
            let mut acc = IntPoly::default();
            for j in 0..n {
                let minor: Vec<IntPoly> = (1..n)
                    .flat_map(|i| (0..n).filter(move |&c| c != j).map(move |c| (i, c)))
                    .map(|(i, c)| m[i * n + c].clone())
                    .collect();
                let term = m[j].mul(&rec(&minor, n - 1));
                let coeffs: Vec<BigInt> = (0..=term.degree().unwrap_or(0).max(acc.degree().unwrap_or(0)))
                    .map(|k| {
                        if j % 2 == 0 {
                            acc.coeff(k) + term.coeff(k)
                        } else {
                            acc.coeff(k) - term.coeff(k)
                        }
                    })
                    .collect();
                acc = IntPoly::new(coeffs);
            }
            acc
        }
        rec(&entries, n)
    }

    #[test]
    fn one_by_one() {
        let a = IntMatrix::from_rows(&[[1]]);
        assert_eq!(det_linear_pencil(&a, &a).unwrap(), IntPoly::from_i64(&[1, -1]));
    }

    #[test]
    fn trefoil_alexander() {
        let a = IntMatrix::from_rows(&[[-1, 1], [0, -1]]);
        let d = det_linear_pencil(&a, &a.transpose()).unwrap();
        assert_eq!(d, IntPoly::from_i64(&[1, -1, 1]));
    }

    #[test]
    fn t25_alexander_matches_cofactor_oracle() {
        let a = IntMatrix::from_rows(&[[-1, 1, 0, 0], [0, -1, 1, 0], [0, 0, -1, 1], [0, 0, 0, -1]]);
        let d = det_linear_pencil(&a, &a.transpose()).unwrap();
        assert_eq!(d, det_poly_cofactor(&a, &a.transpose()));
        assert_eq!(d, IntPoly::from_i64(&[1, -1, 1, -1, 1]));
    }

    #[test]
    fn empty_matrix() {
        let z = IntMatrix::zeros(0, 0);
        assert_eq!(det_linear_pencil(&z, &z).unwrap(), IntPoly::one());
    }

    #[test]
    fn mismatched_shapes() {
        let a = IntMatrix::identity(2);
        let b = IntMatrix::identity(3);
        assert!(det_linear_pencil(&a, &b).is_err());
    }
}
