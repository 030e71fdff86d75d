//! Solution groups of `M · c ≡ 0 (mod q)` for prime-power `q`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::snf::smith_normal_form;
use super::IntMatrix;
use crate::arith::{prime_power, reduce_mod};
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// The kernel as a direct sum of cyclic pieces: generator `g` of order `k`
/// contributes `{0, g, 2g, …, (k-1)g}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModKernel {
    pub modulus: u64,
    pub dimension: usize,
    pub generators: Vec<KernelGenerator>,
    pub order: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelGenerator {
    pub values: Vec<u64>,
    pub order: u64,
}

impl ModKernel {
    /// All solutions in lexicographic order of their value vectors.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<Vec<u64>>> {
        let total = self
            .order
            .to_u64()
            .filter(|&n| n <= cap)
            .ok_or_else(|| Error::cap(&self.order, cap))?;
        let q = self.modulus;
        let mut out: Vec<Vec<u64>> = Vec::with_capacity(total as usize);
        out.push(vec![0; self.dimension]);
        for g in &self.generators {
            let mut next = Vec::with_capacity(out.len() * g.order as usize);
            for base in &out {
                let mut cur = base.clone();
                for _ in 0..g.order {
                    next.push(cur.clone());
                    for (c, v) in cur.iter_mut().zip(&g.values) {
                        *c = (*c + v) % q;
                    }
                }
            }
            out = next;
        }
        out.sort_unstable();
        out.dedup();
        debug_assert_eq!(out.len() as u64, total);
        Ok(out)
    }

    pub fn contains(&self, m: &IntMatrix, c: &[u64]) -> bool {
        satisfies(m, c, self.modulus)
    }
}

/// `M · c ≡ 0 (mod q)`.
pub fn satisfies(m: &IntMatrix, c: &[u64], q: u64) -> bool {
    if c.len() != m.cols() {
        return false;
    }
    let qb = BigInt::from(q);
    (0..m.rows()).all(|i| {
        let s: BigInt = m
            .row(i)
            .iter()
            .zip(c)
            .filter(|(_, &x)| x != 0)
            .map(|(a, &x)| a * BigInt::from(x))
            .sum();
        s.mod_floor(&qb).is_zero()
    })
}

pub fn kernel_mod_q(m: &IntMatrix, q: u64) -> Result<ModKernel> {
    let n = m.ensure_square()?;
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    let snf = smith_normal_form(m);
    let qb = BigInt::from(q);
    let mut generators = Vec::new();
    let mut order = BigUint::from(1u32);
    for i in 0..n {
        let d = &snf.d[(i, i)];
        // number of solutions of d·w ≡ 0 (mod q)
        let g = if d.is_zero() {
            q
        } else {
            d.gcd(&qb).to_u64().unwrap()
        };
        order *= g;
        if g == 1 {
            continue;
        }
        let step = BigInt::from(q / g);
        let values: Vec<u64> = (0..n).map(|r| reduce_mod(&(&snf.v[(r, i)] * &step), q)).collect();
        generators.push(KernelGenerator { values, order: g });
    }
    Ok(ModKernel {
        modulus: q,
        dimension: n,
        generators,
        order,
    })
}
