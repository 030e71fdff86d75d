//! Univariate polynomials over ℤ and ℚ, Sturm sequences, and the
//! reciprocal-to-trace substitution `x = t + 1/t`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Integer polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Exact quotient by a monic divisor; `None` if the division leaves a remainder.
    pub fn div_exact_monic(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.divrem_monic(divisor);
        r.is_zero().then_some(q)
    }

    /// Remainder after division by a monic polynomial.
    pub fn rem_monic(&self, divisor: &Self) -> Self {
        self.divrem_monic(divisor).1
    }

    fn divrem_monic(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        assert!(divisor.coeffs[dd].is_one(), "divisor must be monic");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::default(), self.clone());
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                r[k + i] -= &c * d;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Strips a factor `t^k` so that the constant coefficient is nonzero.
    pub fn without_power_of_t(&self) -> Self {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        Self::new(self.coeffs[k..].to_vec())
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// `t^deg · p(1/t) = ±p(t)` after removing powers of `t`.
    pub fn is_reciprocal(&self) -> bool {
        let p = self.without_power_of_t();
        let c = &p.coeffs;
        let rev: Vec<BigInt> = c.iter().rev().cloned().collect();
        *c == rev || c.iter().zip(&rev).all(|(a, b)| *a == -b)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::bigjson::vec::serialize(&self.coeffs, s)
    }
}

/// Rational polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::from_i64(coeffs).to_rat()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = BigRational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::default();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::default(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                r[k + i] -= &c * di;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
            None => Self::default(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Square-free decomposition `p = c · ∏ f_k^k` (Yun), returning `(f_k, k)`
    /// for the nonconstant factors.
    pub fn squarefree_decomposition(&self) -> Vec<(RatPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let dp = self.derivative();
        let a = self.gcd(&dp);
        let mut b = self.divrem(&a).0;
        let mut c = dp.divrem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut k = 1;
        loop {
            let f = b.gcd(&d);
            b = b.divrem(&f).0;
            c = d.divrem(&f).0;
            if f.degree().unwrap_or(0) > 0 {
                out.push((f.monic(), k));
            }
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            d = c.sub(&b.derivative());
            k += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> RatPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.divrem(&self.gcd(&self.derivative())).0.monic()
    }
}

pub fn sign(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm chain `p, p', -rem(p, p'), …`.
pub fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![p.clone()];
    if p.is_zero() {
        return chain;
    }
    let mut prev = p.clone();
    let mut cur = p.derivative();
    while !cur.is_zero() {
        chain.push(cur.clone());
        let r = prev.rem(&cur).neg();
        prev = cur;
        cur = r;
    }
    chain
}

fn sign_variations(chain: &[RatPoly], x: &BigRational) -> usize {
    let mut last = 0;
    let mut count = 0;
    for p in chain {
        let s = sign(&p.eval(x));
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of `p` in the half-open interval `(lo, hi]`.
pub fn count_distinct_roots(p: &RatPoly, lo: &BigRational, hi: &BigRational) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let chain = sturm_chain(&p.squarefree_part());
    sign_variations(&chain, lo).saturating_sub(sign_variations(&chain, hi))
}

/// `D_k(x)` with `t^k + t^{-k} = D_k(t + 1/t)`: `D_0 = 2`, `D_1 = x`,
/// `D_{k+1} = x D_k - D_{k-1}`.
pub fn trace_polys(max_k: usize) -> Vec<RatPoly> {
    let mut out = vec![RatPoly::from_i64(&[2])];
    if max_k >= 1 {
        out.push(RatPoly::x());
    }
    for k in 2..=max_k {
        let next = RatPoly::x().mul(&out[k - 1]).sub(&out[k - 2]);
        out.push(next);
    }
    out
}

/// For a symmetric even-degree `p(t)` (after stripping powers of `t`) returns
/// `P` with `p(t) = t^e · P(t + 1/t)`, `deg P = e`.
pub fn reciprocal_to_trace(p: &IntPoly) -> Result<RatPoly> {
    let p = p.without_power_of_t();
    let Some(d) = p.degree() else {
        return Err(Error::NonReciprocal);
    };
    let c = p.coeffs();
    if d % 2 != 0 || (0..=d).any(|i| c[i] != c[d - i]) {
        return Err(Error::NonReciprocal);
    }
    let e = d / 2;
    let dk = trace_polys(e);
    let mut out = RatPoly::constant(BigRational::from_integer(c[e].clone()));
    for k in 1..=e {
        out = out.add(&dk[k].scale(&BigRational::from_integer(c[e + k].clone())));
    }
    Ok(out)
}

/// Number of roots of `Δ` on the unit circle, with multiplicity.
///
/// `Δ` must be symmetric of even degree (up to a power of `t`) and nonzero at
/// `t = ±1`. Each root `x ∈ (-2, 2)` of the trace polynomial corresponds to the
/// conjugate pair `e^{±iθ}` with `x = 2cos θ`.
pub fn unit_circle_root_count(delta: &IntPoly) -> Result<usize> {
    let trace = reciprocal_to_trace(delta)?;
    let two = BigRational::from_integer(BigInt::from(2));
    let m_two = -two.clone();
    if trace.eval(&two).is_zero() || trace.eval(&m_two).is_zero() {
        return Err(Error::RootAtPlusMinusOne);
    }
    let mut total = 0;
    for (f, mult) in trace.squarefree_decomposition() {
        total += 2 * mult * count_distinct_roots(&f, &m_two, &two);
    }
    Ok(total)
}

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1);
    let mut xn1 = vec![BigInt::zero(); n as usize + 1];
    xn1[0] = BigInt::from(-1);
    xn1[n as usize] = BigInt::one();
    let mut p = IntPoly::new(xn1);
    for d in 1..n {
        if n % d == 0 {
            p = p
                .div_exact_monic(&cyclotomic(d))
                .expect("cyclotomic factor divides x^n - 1");
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64(&[1, -1, 1]).to_string(), "t^2 - t + 1");
        assert_eq!(IntPoly::from_i64(&[1, -1]).to_string(), "-t + 1");
        assert_eq!(IntPoly::from_i64(&[-3, 0, 2]).to_string(), "2t^2 - 3");
        assert_eq!(IntPoly::default().to_string(), "0");
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), IntPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(9), IntPoly::from_i64(&[1, 0, 0, 1, 0, 0, 1]));
        assert_eq!(cyclotomic(10), IntPoly::from_i64(&[1, -1, 1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn unit_circle_counts() {
        assert_eq!(
            unit_circle_root_count(&IntPoly::from_i64(&[1, -1, 1])).unwrap(),
            2
        );
        assert_eq!(
            unit_circle_root_count(&IntPoly::from_i64(&[1, -3, 1])).unwrap(),
            0
        );
        // (t^2 - t + 1)^2: a double pair
        let p = IntPoly::from_i64(&[1, -1, 1]).mul(&IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(unit_circle_root_count(&p).unwrap(), 4);
        // T(2,5): all four roots on the circle
        assert_eq!(
            unit_circle_root_count(&IntPoly::from_i64(&[1, -1, 1, -1, 1])).unwrap(),
            4
        );
        // a factor of t is ignored
        assert_eq!(
            unit_circle_root_count(&IntPoly::from_i64(&[0, 1, -3, 1])).unwrap(),
            0
        );
    }

    #[test]
    fn non_reciprocal_rejected() {
        assert!(matches!(
            unit_circle_root_count(&IntPoly::from_i64(&[1, 2, 3])),
            Err(Error::NonReciprocal)
        ));
        assert!(matches!(
            unit_circle_root_count(&IntPoly::from_i64(&[1, -1])),
            Err(Error::NonReciprocal)
        ));
        assert!(matches!(
            unit_circle_root_count(&IntPoly::from_i64(&[1, -2, 1])),
            Err(Error::RootAtPlusMinusOne)
        ));
    }

    #[test]
    fn sturm_counts() {
        // (x - 1)(x - 2)(x + 3)
        let p = RatPoly::from_i64(&[6, -7, 0, 1]);
        assert_eq!(count_distinct_roots(&p, &q(-10), &q(10)), 3);
        assert_eq!(count_distinct_roots(&p, &q(0), &q(1)), 1);
        assert_eq!(count_distinct_roots(&p, &q(1), &q(2)), 1);
        assert_eq!(count_distinct_roots(&p, &q(-2), &q(0)), 0);
    }

    #[test]
    fn yun() {
        // (x-1)^2 (x+1)
        let p = RatPoly::from_i64(&[1, -1, -1, 1]);
        let d = p.squarefree_decomposition();
        assert_eq!(
            d,
            vec![(RatPoly::from_i64(&[1, 1]), 1), (RatPoly::from_i64(&[-1, 1]), 2)]
        );
    }

    #[test]
    fn exact_division() {
        let a = IntPoly::from_i64(&[1, -1, 1]);
        let b = IntPoly::from_i64(&[1, 1]);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact_monic(&b), Some(a.clone()));
        assert!(a.div_exact_monic(&b).is_none());
        assert_eq!(
            IntPoly::from_i64(&[0, 0, 3, 1]).without_power_of_t(),
            IntPoly::from_i64(&[3, 1])
        );
    }
}
