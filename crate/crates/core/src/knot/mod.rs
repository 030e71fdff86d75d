//! Knot expressions, Seifert matrices, Alexander polynomials and
//! Tristram–Levine signatures.

mod expr;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::cyclotomic::{hermitian_signature, Elem, Embedding};
use crate::error::{Error, Result};
use crate::linalg::{det_linear_pencil, is_unit, IntMatrix};
use crate::poly::IntPoly;

pub use crate::poly::unit_circle_root_count;
pub use expr::{parse_knot_expr, parse_knot_expr_with, FsResolver, KnotExpr, MatrixResolver};

/// A square integer matrix `M` with `|det(M - Mᵀ)| = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SeifertKnot {
    matrix: IntMatrix,
}

impl SeifertKnot {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        matrix.ensure_square()?;
        let d = matrix.sub(&matrix.transpose()).det()?;
        if !is_unit(&d) {
            return Err(Error::NotKnotSeifert(d.to_string()));
        }
        Ok(SeifertKnot { matrix })
    }

    pub fn unknot() -> Self {
        SeifertKnot {
            matrix: IntMatrix::zeros(0, 0),
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    /// Seifert matrix of `T(2,n)`: `-1` on the diagonal, `+1` just above it.
    pub fn torus_2n(n: u64) -> Self {
        assert!(n % 2 == 1, "T(2,n) is a knot only for odd n");
        let g2 = (n - 1) as usize;
        let mut m = IntMatrix::zeros(g2, g2);
        for i in 0..g2 {
            m[(i, i)] = BigInt::from(-1);
            if i + 1 < g2 {
                m[(i, i + 1)] = BigInt::from(1);
            }
        }
        SeifertKnot { matrix: m }
    }

    pub fn mirror(&self) -> Self {
        SeifertKnot {
            matrix: self.matrix.transpose().neg(),
        }
    }

    pub fn sum(&self, other: &SeifertKnot) -> Self {
        SeifertKnot {
            matrix: IntMatrix::block_diag(&[&self.matrix, &other.matrix]),
        }
    }
}

/// Realizes an expression as a block Seifert matrix.
pub fn seifert_matrix(e: &KnotExpr) -> Result<SeifertKnot> {
    Ok(match e {
        KnotExpr::Torus { p, q } => SeifertKnot::torus_2n(torus_odd_parameter(*p, *q)?),
        KnotExpr::Mirror(inner) => seifert_matrix(inner)?.mirror(),
        KnotExpr::Multiple(k, inner) => {
            let one = seifert_matrix(inner)?;
            let blocks: Vec<&IntMatrix> = (0..*k).map(|_| one.matrix()).collect();
            SeifertKnot {
                matrix: IntMatrix::block_diag(&blocks),
            }
        }
        KnotExpr::Sum(a, b) => seifert_matrix(a)?.sum(&seifert_matrix(b)?),
        KnotExpr::Literal(k) => k.clone(),
    })
}

fn torus_odd_parameter(p: u64, q: u64) -> Result<u64> {
    match (p, q) {
        (2, n) | (n, 2) => Ok(n),
        _ => Err(Error::UnsupportedTorusKnot { p, q }),
    }
}

/// `det(A - tAᵀ)`.
pub fn alexander_polynomial(k: &SeifertKnot) -> IntPoly {
    let a = k.matrix();
    det_linear_pencil(a, &a.transpose()).expect("Seifert matrices are square")
}

/// A reduced fraction `j/n` with `0 < j < n`, standing for `ω = e^{2πij/n}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct RationalAngle {
    num: u64,
    den: u64,
}

impl RationalAngle {
    pub fn new(j: u64, n: u64) -> Result<Self> {
        if n == 0 || j == 0 || j >= n {
            return Err(Error::invalid(format!(
                "angle {j}/{n} must lie strictly between 0 and 1"
            )));
        }
        let g = j.gcd(&n);
        Ok(RationalAngle {
            num: j / g,
            den: n / g,
        })
    }

    /// `a/q` reduced, or `None` when `a ≡ 0 (mod q)` (the point `ω = 1`).
    pub fn from_residue(a: u64, q: u64) -> Option<Self> {
        let a = a % q;
        (a != 0).then(|| RationalAngle::new(a, q).unwrap())
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn complement(&self) -> Self {
        RationalAngle {
            num: self.den - self.num,
            den: self.den,
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.into(), self.den.into())
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for RationalAngle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| Error::invalid(format!("angle {s:?} is not of the form j/n")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::invalid(format!("angle {s:?} is not of the form j/n")))
        };
        RationalAngle::new(parse(a)?, parse(b)?)
    }
}

impl Serialize for RationalAngle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The Hermitian form `(1-ω)A + (1-ω̄)Aᵀ` over ℚ(ζ_n).
fn tl_form(emb: &Embedding, a: &IntMatrix) -> Vec<Vec<Elem>> {
    let f = &emb.field;
    let u = f.sub(&f.one(), &f.x_power(1));
    let ubar = f.conj(&u);
    let n = a.rows();
    let rat = |x: &BigInt| BigRational::from_integer(x.clone());
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| f.add(&f.scale(&u, &rat(&a[(i, j)])), &f.scale(&ubar, &rat(&a[(j, i)]))))
                .collect()
        })
        .collect()
}

fn tl_signature_with(emb: &Embedding, k: &SeifertKnot) -> Result<i64> {
    if k.size() == 0 {
        return Ok(0);
    }
    hermitian_signature(emb, tl_form(emb, k.matrix())).ok_or(Error::SingularOmega { n: emb.field.order() })
}

/// Tristram–Levine signature at `ω = e^{2πis}`.
///
/// Fails with [`Error::SingularOmega`] exactly when the form is degenerate,
/// i.e. when `Φ_n` divides the Alexander polynomial.
pub fn tl_signature(k: &SeifertKnot, s: RationalAngle) -> Result<i64> {
    if k.size() == 0 {
        return Ok(0);
    }
    tl_signature_with(&Embedding::new(s.den(), s.num()), k)
}

/// `⌈|σ(1/2)| / 2⌉`.
pub fn g4_signature_bound(k: &SeifertKnot) -> Result<u64> {
    let s = tl_signature(k, RationalAngle::new(1, 2)?)?;
    Ok(s.unsigned_abs().div_ceil(2))
}

/// Signatures of knot expressions computed leaf by leaf.
///
/// Connected sums add, mirrors negate and `k`-fold multiples scale, so large
/// expressions never need their full Seifert matrix. Leaf values and field
/// embeddings are memoized.
#[derive(Default)]
pub struct SignatureCache {
    embeddings: HashMap<RationalAngle, Embedding>,
    leaves: HashMap<(SeifertKnot, RationalAngle), i64>,
}

impl SignatureCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn leaf(&mut self, k: &SeifertKnot, s: RationalAngle) -> Result<i64> {
        if k.size() == 0 {
            return Ok(0);
        }
        if let Some(v) = self.leaves.get(&(k.clone(), s)) {
            return Ok(*v);
        }
        let emb = self
            .embeddings
            .entry(s)
            .or_insert_with(|| Embedding::new(s.den(), s.num()));
        let v = tl_signature_with(emb, k)?;
        self.leaves.insert((k.clone(), s), v);
        Ok(v)
    }

    pub fn signature(&mut self, e: &KnotExpr, s: RationalAngle) -> Result<i64> {
        let overflow = || Error::invalid("signature exceeds the i64 range");
        Ok(match e {
            KnotExpr::Torus { p, q } => {
                let k = SeifertKnot::torus_2n(torus_odd_parameter(*p, *q)?);
                self.leaf(&k, s)?
            }
            KnotExpr::Mirror(inner) => -self.signature(inner, s)?,
            KnotExpr::Multiple(k, inner) => {
                if *k == 0 {
                    // still validate the summand
                    seifert_matrix(inner)?;
                    0
                } else {
                    let v = self.signature(inner, s)?;
                    i64::try_from(*k)
                        .ok()
                        .and_then(|k| v.checked_mul(k))
                        .ok_or_else(overflow)?
                }
            }
            KnotExpr::Sum(a, b) => {
                let x = self.signature(a, s)?;
                let y = self.signature(b, s)?;
                x.checked_add(y).ok_or_else(overflow)?
            }
            KnotExpr::Literal(k) => self.leaf(k, s)?,
        })
    }
}

/// Signature of an expression via additivity; agrees with
/// `tl_signature(&seifert_matrix(e)?, s)`.
pub fn signature_of_expr(e: &KnotExpr, s: RationalAngle) -> Result<i64> {
    SignatureCache::new().signature(e, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn angle(j: u64, n: u64) -> RationalAngle {
        RationalAngle::new(j, n).unwrap()
    }

    fn expr(s: &str) -> KnotExpr {
        parse_knot_expr(s).unwrap()
    }

    #[test]
    fn torus_matrices() {
        let t = seifert_matrix(&expr("T(2,3)")).unwrap();
        assert_eq!(t.matrix(), &IntMatrix::from_rows(&[[-1, 1], [0, -1]]));
        let m = seifert_matrix(&expr("mirror(T(2,3))")).unwrap();
        assert_eq!(m.matrix(), &IntMatrix::from_rows(&[[1, 0], [-1, 1]]));
        assert_eq!(seifert_matrix(&expr("0*T(2,5)")).unwrap().size(), 0);
        assert_eq!(seifert_matrix(&expr("T(3,2)")).unwrap(), t);
        assert_eq!(seifert_matrix(&expr("T(2,1)")).unwrap().size(), 0);
        assert!(matches!(
            seifert_matrix(&expr("T(3,4)")),
            Err(Error::UnsupportedTorusKnot { p: 3, q: 4 })
        ));
    }

    #[test]
    fn alexander() {
        assert_eq!(alexander_polynomial(&SeifertKnot::unknot()), IntPoly::one());
        let t = seifert_matrix(&expr("T(2,3)")).unwrap();
        assert_eq!(alexander_polynomial(&t), IntPoly::from_i64(&[1, -1, 1]));
        let t5 = seifert_matrix(&expr("T(2,5)")).unwrap();
        assert_eq!(alexander_polynomial(&t5), IntPoly::from_i64(&[1, -1, 1, -1, 1]));
    }

    #[test]
    fn angles() {
        assert_eq!(angle(3, 9), angle(1, 3));
        assert_eq!("2/6".parse::<RationalAngle>().unwrap(), angle(1, 3));
        assert!("0/3".parse::<RationalAngle>().is_err());
        assert!("3/3".parse::<RationalAngle>().is_err());
        assert!("x".parse::<RationalAngle>().is_err());
        assert_eq!(RationalAngle::from_residue(9, 9), None);
        assert_eq!(RationalAngle::from_residue(12, 9), Some(angle(1, 3)));
    }

    #[test]
    fn trefoil_signatures() {
        let t = seifert_matrix(&expr("T(2,3)")).unwrap();
        assert_eq!(tl_signature(&t, angle(1, 2)).unwrap(), -2);
        assert_eq!(tl_signature(&t, angle(1, 9)).unwrap(), 0);
        assert_eq!(tl_signature(&t, angle(2, 9)).unwrap(), -2);
        assert_eq!(tl_signature(&t.mirror(), angle(1, 2)).unwrap(), 2);
        assert!(matches!(
            tl_signature(&t, angle(1, 6)),
            Err(Error::SingularOmega { n: 6 })
        ));
        assert_eq!(g4_signature_bound(&t).unwrap(), 1);
        assert_eq!(g4_signature_bound(&SeifertKnot::unknot()).unwrap(), 0);
    }

    #[test]
    fn footnote_knot_signs() {
        let s = expr("3*T(2,3) # 3*T(2,5) # T(2,7) # 5*mirror(T(2,9))");
        let k = seifert_matrix(&s).unwrap();
        let mut cache = SignatureCache::new();
        for (j, want) in [(1, 2), (2, 4), (3, 8), (4, 16)] {
            assert_eq!(cache.signature(&s, angle(j, 9)).unwrap(), want);
            assert_eq!(tl_signature(&k, angle(j, 9)).unwrap(), want);
        }
    }
}
