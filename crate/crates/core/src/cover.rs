//! First homology of the double branched cover and its characters.
//!
//! `H₁(Σ_K)` is generated by classes `y_0, …, y_{n-1}` dual to a basis of the
//! Seifert surface, with relations given by the columns of `A + Aᵀ`. A
//! character to ℤ/q is stored as its value on every `y_i`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, reduce_mod, units};
use crate::bigjson;
use crate::error::{Error, Result};
use crate::knot::SeifertKnot;
use crate::linalg::{invariant_factors, kernel_mod_q, satisfies, IntMatrix, ModKernel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverPresentation {
    relation_matrix: IntMatrix,
    invariant_factors: Vec<BigInt>,
    order: BigInt,
}

impl CoverPresentation {
    /// Presentation with relation matrix `A + Aᵀ`.
    pub fn from_seifert(k: &SeifertKnot) -> Result<Self> {
        Self::from_relation_matrix(k.matrix().symmetrized())
    }

    pub fn from_relation_matrix(m: IntMatrix) -> Result<Self> {
        m.ensure_square()?;
        let order = m.det()?.abs();
        if order.is_zero() {
            return Err(Error::ZeroDeterminant);
        }
        Ok(CoverPresentation {
            invariant_factors: invariant_factors(&m),
            relation_matrix: m,
            order,
        })
    }

    pub fn relation_matrix(&self) -> &IntMatrix {
        &self.relation_matrix
    }

    pub fn generator_count(&self) -> usize {
        self.relation_matrix.rows()
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    /// `|H₁(Σ_K)| = |det(A + Aᵀ)|`.
    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn character_group(&self, q: u64) -> Result<ModKernel> {
        kernel_mod_q(&self.relation_matrix, q)
    }

    /// `∏ gcd(d_i, q)`.
    pub fn character_count(&self, q: u64) -> Result<BigUint> {
        Ok(self.character_group(q)?.order)
    }

    /// All characters to ℤ/q in lexicographic order of their values.
    pub fn enumerate_characters(&self, q: u64, cap: u64) -> Result<Vec<Character>> {
        Ok(self
            .character_group(q)?
            .enumerate(cap)?
            .into_iter()
            .map(|values| Character { modulus: q, values })
            .collect())
    }

    /// Checks that `values` satisfy every relation mod `q`.
    pub fn character(&self, q: u64, values: Vec<u64>) -> Result<Character> {
        let n = self.generator_count();
        if values.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: values.len(),
            });
        }
        let values: Vec<u64> = values.into_iter().map(|v| v % q).collect();
        if !satisfies(&self.relation_matrix, &values, q) {
            return Err(Error::invalid("values violate the relations of H1"));
        }
        Ok(Character { modulus: q, values })
    }
}

/// Coordinates of a class in the `y_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomologyClass(#[serde(with = "bigjson::vec")] pub Vec<BigInt>);

impl HomologyClass {
    pub fn from_i64(c: &[i64]) -> Self {
        HomologyClass(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::from(1);
        HomologyClass(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A homomorphism `H₁(Σ_K) → ℤ/q` given by its values on the `y_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    modulus: u64,
    values: Vec<u64>,
}

impl Character {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `gcd(values, q) = 1`.
    pub fn is_surjective(&self) -> bool {
        self.values.iter().fold(self.modulus, |g, &v| gcd(g, v)) == 1
    }

    pub fn evaluate(&self, z: &HomologyClass) -> Result<u64> {
        if z.len() != self.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                found: z.len(),
            });
        }
        let s: BigInt =
            z.0.iter()
                .zip(&self.values)
                .filter(|(_, &v)| v != 0)
                .map(|(c, &v)| c * BigInt::from(v))
                .sum();
        Ok(reduce_mod(&s, self.modulus))
    }

    pub fn scale(&self, u: u64) -> Character {
        let q = self.modulus;
        Character {
            modulus: q,
            values: self
                .values
                .iter()
                .map(|&v| (v as u128 * u as u128 % q as u128) as u64)
                .collect(),
        }
    }

    pub fn neg(&self) -> Character {
        self.scale(self.modulus - 1)
    }

    pub fn add(&self, other: &Character) -> Result<Character> {
        if self.modulus != other.modulus {
            return Err(Error::MixedModuli(self.modulus, other.modulus));
        }
        if self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                found: other.values.len(),
            });
        }
        let q = self.modulus;
        Ok(Character {
            modulus: q,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a + b) % q)
                .collect(),
        })
    }
}

/// Partition of `chars` into orbits under multiplication by units of ℤ/q.
/// Classes are sorted and listed by their smallest member.
pub fn rescaling_classes(chars: &[Character]) -> Result<Vec<Vec<Character>>> {
    let Some(first) = chars.first() else {
        return Ok(Vec::new());
    };
    let q = first.modulus;
    if let Some(bad) = chars.iter().find(|c| c.modulus != q) {
        return Err(Error::MixedModuli(q, bad.modulus));
    }
    let us = units(q);
    let mut remaining: BTreeSet<&Character> = chars.iter().collect();
    let mut classes = Vec::new();
    while let Some(&c) = remaining.iter().next() {
        let orbit: BTreeSet<Character> = us
            .iter()
            .map(|&u| c.scale(u))
            .filter(|o| remaining.contains(o))
            .collect();
        for o in &orbit {
            remaining.remove(o);
        }
        classes.push(orbit.into_iter().collect());
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::{parse_knot_expr, seifert_matrix};

    fn trefoil_cover() -> CoverPresentation {
        CoverPresentation::from_seifert(&seifert_matrix(&parse_knot_expr("T(2,3)").unwrap()).unwrap())
            .unwrap()
    }

    #[test]
    fn unknot_and_trefoil() {
        let u = CoverPresentation::from_seifert(&SeifertKnot::unknot()).unwrap();
        assert_eq!(u.order(), &BigInt::from(1));
        assert!(u.invariant_factors().is_empty());
        assert_eq!(u.enumerate_characters(3, 10).unwrap().len(), 1);

        let t = trefoil_cover();
        assert_eq!(t.invariant_factors(), &[BigInt::from(3)]);
        let chars = t.enumerate_characters(3, 100).unwrap();
        assert_eq!(chars.len(), 3);
        assert_eq!(chars[1].values(), &[1, 2]);
    }

    #[test]
    fn zero_determinant_rejected() {
        let m = IntMatrix::from_rows(&[[1, 1], [1, 1]]);
        assert!(matches!(
            CoverPresentation::from_relation_matrix(m),
            Err(Error::ZeroDeterminant)
        ));
    }

    #[test]
    fn evaluation() {
        let t = trefoil_cover();
        let chars = t.enumerate_characters(3, 100).unwrap();
        let z = HomologyClass::from_i64(&[1, -1]);
        assert_eq!(chars[0].evaluate(&z).unwrap(), 0);
        assert_eq!(chars[1].evaluate(&z).unwrap(), 2);
        assert_eq!(chars[1].evaluate(&HomologyClass::unit(2, 1)).unwrap(), 2);
        assert!(matches!(
            chars[1].evaluate(&HomologyClass::from_i64(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn surjectivity() {
        let c = |v: Vec<u64>| Character {
            modulus: 9,
            values: v,
        };
        assert!(!c(vec![0, 0]).is_surjective());
        assert!(!c(vec![3, 6]).is_surjective());
        assert!(c(vec![1, 0]).is_surjective());
        assert!(c(vec![3, 2]).is_surjective());
    }

    #[test]
    fn rescaling() {
        let c = |q, v: Vec<u64>| Character {
            modulus: q,
            values: v,
        };
        let classes = rescaling_classes(&[c(9, vec![0])]).unwrap();
        assert_eq!(classes, vec![vec![c(9, vec![0])]]);
        let orbit: Vec<Character> = [1, 2, 4, 5, 7, 8]
            .iter()
            .map(|&u| c(9, vec![u, 3 * u % 9]))
            .collect();
        let classes = rescaling_classes(&orbit).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].len(), 6);
        assert!(matches!(
            rescaling_classes(&[c(9, vec![1]), c(3, vec![1])]),
            Err(Error::MixedModuli(9, 3))
        ));
        let t = trefoil_cover();
        let all = t.enumerate_characters(3, 100).unwrap();
        let classes = rescaling_classes(&all).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[1].len(), 2);
    }

    #[test]
    fn character_validation() {
        let t = trefoil_cover();
        assert!(t.character(3, vec![1, 2]).is_ok());
        assert!(t.character(3, vec![1, 1]).is_err());
        assert!(t.character(3, vec![1]).is_err());
    }
}
