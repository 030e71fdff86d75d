//! Signature of the generalized Hopf link `L_m`, the Hopf link with each
//! component replaced by `m` parallel copies.
//!
//! With every color at `ω = -1` the colored signature reduces to
//! `(ind(Σ Log(-1)) − Σ ind(Log(-1)))² = (ind(m/2) − m·ind(1/2))²` and
//! `σ(L_m) = σ_col − lk(L_m)`, with `lk(L_m) = m²`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::cyclotomic::{hermitian_signature, Embedding};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// `⌊x⌋ − ⌊−x⌋`.
pub fn ind(x: &BigRational) -> BigInt {
    x.floor().to_integer() - (-x).floor().to_integer()
}

fn require_odd(m: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    if m % 2 == 0 {
        return Err(Error::EvenM(m));
    }
    Ok(())
}

pub fn sigma_col_hopf_cable(m: u64) -> Result<BigInt> {
    require_odd(m)?;
    let half = BigRational::new(1.into(), 2.into());
    let d = ind(&(BigRational::from_integer(m.into()) * &half)) - BigInt::from(m) * ind(&half);
    Ok(&d * &d)
}

pub fn linking_number_lm(m: u64) -> Result<BigInt> {
    require_odd(m)?;
    Ok(BigInt::from(m) * m)
}

pub fn signature_lm(m: u64) -> Result<BigInt> {
    Ok(sigma_col_hopf_cable(m)? - linking_number_lm(m)?)
}

/// `⌈|σ(L_m) + 2(m − 1)| / 2⌉ = ⌈(m² − 2(m − 1)) / 2⌉`, the signature bound
/// for a knot obtained from `L_m` by band moves.
pub fn g4_bound_banded(m: u64) -> Result<BigInt> {
    let s = signature_lm(m)?;
    let num = -s - BigInt::from(2 * (m - 1));
    Ok(Integer::div_ceil(&num, &BigInt::from(2)))
}

/// Signature of the symmetrized Seifert form `A + Aᵀ` of a link, or `None`
/// if it is singular.
pub fn link_signature(a: &IntMatrix) -> Option<i64> {
    let n = a.rows();
    if n == 0 {
        return Some(0);
    }
    let emb = Embedding::new(2, 1);
    let f = &emb.field;
    let s = a.symmetrized();
    let h = (0..n)
        .map(|i| (0..n).map(|j| f.from_int(&s[(i, j)])).collect())
        .collect();
    hermitian_signature(&emb, h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HopfReport {
    pub m: u64,
    #[serde(with = "crate::bigjson")]
    pub sigma: BigInt,
    #[serde(with = "crate::bigjson")]
    pub colored: BigInt,
    #[serde(with = "crate::bigjson")]
    pub linking: BigInt,
    #[serde(with = "crate::bigjson")]
    pub g4_bound: BigInt,
}

pub fn hopf_report(m: u64) -> Result<HopfReport> {
    Ok(HopfReport {
        m,
        sigma: signature_lm(m)?,
        colored: sigma_col_hopf_cable(m)?,
        linking: linking_number_lm(m)?,
        g4_bound: g4_bound_banded(m)?,
    })
}
