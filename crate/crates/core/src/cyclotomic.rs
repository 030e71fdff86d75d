//! Exact arithmetic in ℚ(ζ_n) and certified signs of real elements under a
//! fixed complex embedding `ζ_n ↦ e^{2πij/n}`.
//!
//! Elements are polynomials in the abstract root `X` reduced modulo `Φ_n`.
//! Complex conjugation is `X ↦ X^{-1}`, which agrees with conjugation under
//! every embedding, so field arithmetic never depends on `j`. Only the sign of
//! a real element does: a real element `r = Σ a_k X^k` equals `(r + r̄)/2`,
//! i.e. `g(c) = Σ a_k D_k(c) / 2` with `c = 2cos(2πj/n)`. The sign of `g(c)` is
//! certified by refining a rational isolating interval of `c` (a root of the
//! minimal polynomial `Ψ_n` of `2cos(2π/n)`) until `g` has no root in it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::gcd;
use crate::poly::{count_distinct_roots, cyclotomic, reciprocal_to_trace, sign, trace_polys, RatPoly};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Elem(Vec<BigRational>);

impl Elem {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }
}

#[derive(Clone, Debug)]
pub struct CyclotomicField {
    n: u64,
    phi: usize,
    /// Φ_n coefficients, ascending, monic.
    modulus: Vec<BigRational>,
    /// `X^k mod Φ_n` for `k ∈ [phi, 2·phi - 1)`.
    high_powers: Vec<Elem>,
    /// `X^{-k} mod Φ_n` for `k ∈ [0, phi)`.
    inverse_powers: Vec<Elem>,
}

impl CyclotomicField {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1);
        let phi_poly = cyclotomic(n);
        let modulus: Vec<BigRational> = phi_poly
            .coeffs()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let phi = modulus.len() - 1;
        let mut field = CyclotomicField {
            n,
            phi,
            modulus,
            high_powers: Vec::new(),
            inverse_powers: Vec::new(),
        };
        let mut pow = field.x_power_naive(phi);
        for _ in phi..(2 * phi).saturating_sub(1) {
            field.high_powers.push(pow.clone());
            pow = field.shift(&pow);
        }
        field.inverse_powers = (0..phi)
            .map(|k| field.x_power_naive((n as usize - k % n as usize) % n as usize))
            .collect();
        field
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn zero(&self) -> Elem {
        Elem(vec![BigRational::zero(); self.phi])
    }

    pub fn from_int(&self, k: &BigInt) -> Elem {
        let mut e = self.zero();
        e.0[0] = BigRational::from_integer(k.clone());
        e
    }

    pub fn one(&self) -> Elem {
        self.from_int(&BigInt::one())
    }

    /// Multiply by `X`.
    fn shift(&self, a: &Elem) -> Elem {
        let mut out = vec![BigRational::zero(); self.phi + 1];
        out[1..].clone_from_slice(&a.0);
        let top = out.pop().unwrap();
        if !top.is_zero() {
            for (o, m) in out.iter_mut().zip(&self.modulus) {
                *o -= &top * m;
            }
        }
        Elem(out)
    }

    fn x_power_naive(&self, k: usize) -> Elem {
        let mut e = self.one();
        for _ in 0..k {
            e = self.shift(&e);
        }
        e
    }

    pub fn x_power(&self, k: u64) -> Elem {
        self.x_power_naive((k % self.n) as usize)
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        Elem(a.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &Elem, k: &BigRational) -> Elem {
        Elem(a.0.iter().map(|x| x * k).collect())
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let phi = self.phi;
        let mut full = vec![BigRational::zero(); 2 * phi - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if !y.is_zero() {
                    full[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<BigRational> = full[..phi].to_vec();
        for (k, c) in full[phi..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&self.high_powers[k].0) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        Elem(out)
    }

    pub fn conj(&self, a: &Elem) -> Elem {
        let mut out = self.zero();
        for (k, c) in a.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.0.iter_mut().zip(&self.inverse_powers[k].0) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        out
    }

    pub fn is_real(&self, a: &Elem) -> bool {
        self.conj(a) == *a
    }

    /// `|a|² = a · ā`.
    pub fn norm_sq(&self, a: &Elem) -> Elem {
        self.mul(a, &self.conj(a))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm over ℚ[X].
    pub fn inv(&self, a: &Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        let m = RatPoly::new(self.modulus.clone());
        let (mut r0, mut r1) = (m, RatPoly::new(a.0.clone()));
        let (mut s0, mut s1) = (RatPoly::default(), RatPoly::constant(BigRational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 is a nonzero constant because Φ_n is irreducible
        let c = r0.coeffs()[0].recip();
        let inv = s0.scale(&c);
        let mut out = self.zero();
        for (o, v) in out.0.iter_mut().zip(inv.coeffs()) {
            *o = v.clone();
        }
        out
    }
}

/// The embedding `X ↦ e^{2πij/n}` together with an isolating interval for
/// `c = 2cos(2πj/n)`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub field: CyclotomicField,
    j: u64,
    trace_min_poly: RatPoly,
    lo: BigRational,
    hi: BigRational,
    trace_basis: Vec<RatPoly>,
}

impl Embedding {
    /// `0 < j < n`, `gcd(j, n) = 1`.
    pub fn new(n: u64, j: u64) -> Self {
        assert!(n >= 2 && 0 < j && j < n && gcd(j, n) == 1);
        let field = CyclotomicField::new(n);
        let two = BigRational::from_integer(2.into());
        let trace_basis = trace_polys(field.degree());
        if n == 2 {
            // ℚ(ζ_2) = ℚ; every element is a constant and c = -2 exactly
            return Embedding {
                field,
                j,
                trace_min_poly: RatPoly::from_i64(&[2, 1]),
                lo: -two.clone() - BigRational::one(),
                hi: -two,
                trace_basis,
            };
        }
        let psi = reciprocal_to_trace(&cyclotomic(n)).expect("Φ_n is palindromic of even degree");
        // roots of Ψ_n are 2cos(2πk/n), gcd(k, n) = 1, k < n/2, decreasing in k
        let jj = j.min(n - j);
        let rank = (1..jj).filter(|&k| gcd(k, n) == 1).count();
        let (lo, hi) = isolate_by_rank(&psi, -two.clone(), two, rank);
        Embedding {
            field,
            j,
            trace_min_poly: psi,
            lo,
            hi,
            trace_basis,
        }
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    /// `g` with `r = g(c)` for a real element `r`.
    fn trace_poly_of(&self, r: &Elem) -> RatPoly {
        let half = BigRational::new(1.into(), 2.into());
        let mut g = RatPoly::default();
        for (k, a) in r.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            g = g.add(&self.trace_basis[k].scale(&(a * &half)));
        }
        g
    }

    /// Certified sign of a real field element under this embedding.
    pub fn real_sign(&self, r: &Elem) -> i32 {
        debug_assert!(self.field.is_real(r), "real_sign on a non-real element");
        if r.is_zero() {
            return 0;
        }
        let g = self.trace_poly_of(r);
        if g.degree().unwrap_or(0) == 0 {
            return sign(&g.coeffs()[0]);
        }
        let psi = &self.trace_min_poly;
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        loop {
            if psi.eval(&hi).is_zero() {
                return sign(&g.eval(&hi));
            }
            if !g.eval(&lo).is_zero() && count_distinct_roots(&g, &lo, &hi) == 0 {
                return sign(&g.eval(&hi));
            }
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            if count_distinct_roots(psi, &mid, &hi) == 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
}

/// Interval `(lo, hi]` containing exactly one root of `p`, namely the one with
/// `rank` roots above it.
fn isolate_by_rank(
    p: &RatPoly,
    mut lo: BigRational,
    mut hi: BigRational,
    mut rank: usize,
) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(2.into());
    loop {
        if count_distinct_roots(p, &lo, &hi) == 1 {
            return (lo, hi);
        }
        let mid = (&lo + &hi) / &two;
        let upper = count_distinct_roots(p, &mid, &hi);
        if rank < upper {
            lo = mid;
        } else {
            rank -= upper;
            hi = mid;
        }
    }
}

/// Signature of a Hermitian matrix over ℚ(ζ_n) under `emb`, or `None` if the
/// matrix is singular.
///
/// Congruence elimination with real pivots. When every remaining diagonal
/// entry vanishes but some `h_ij ≠ 0`, the row/column operation
/// `i ← i + h_ij·j` creates the diagonal entry `2|h_ij|² > 0`.
pub fn hermitian_signature(emb: &Embedding, mut h: Vec<Vec<Elem>>) -> Option<i64> {
    let f = &emb.field;
    let n = h.len();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut sig = 0i64;
    while !alive.is_empty() {
        let pivot = alive.iter().copied().find(|&i| !h[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                let pair = alive.iter().copied().find_map(|i| {
                    alive
                        .iter()
                        .copied()
                        .find(|&j| j != i && !h[i][j].is_zero())
                        .map(|j| (i, j))
                });
                let (i, j) = pair?;
                let u = h[i][j].clone();
                let ubar = f.conj(&u);
                for &l in &alive {
                    let add = f.mul(&u, &h[j][l]);
                    h[i][l] = f.add(&h[i][l], &add);
                }
                for &k in &alive {
                    let add = f.mul(&h[k][j], &ubar);
                    h[k][i] = f.add(&h[k][i], &add);
                }
                i
            }
        };
        let d = h[p][p].clone();
        sig += emb.real_sign(&d) as i64;
        let dinv = f.inv(&d);
        alive.retain(|&i| i != p);
        let factors: Vec<(usize, Elem)> = alive
            .iter()
            .copied()
            .filter(|&k| !h[k][p].is_zero())
            .map(|k| (k, f.mul(&h[k][p], &dinv)))
            .collect();
        for (k, fk) in &factors {
            for &l in &alive {
                if h[p][l].is_zero() {
                    continue;
                }
                let t = f.mul(fk, &h[p][l]);
                h[*k][l] = f.sub(&h[*k][l], &t);
            }
        }
    }
    Some(sig)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn x_to_the_n_is_one() {
        for n in [3, 4, 5, 6, 9, 12] {
            let f = CyclotomicField::new(n);
            assert_eq!(f.x_power(n), f.one());
            let x = f.x_power(1);
            assert_eq!(f.mul(&x, &f.conj(&x)), f.one());
        }
    }

    #[test]
    fn inverses() {
        let f = CyclotomicField::new(9);
        let a = f.add(&f.x_power(1), &f.from_int(&BigInt::from(3)));
        let b = f.inv(&a);
        assert_eq!(f.mul(&a, &b), f.one());
    }

    #[test]
    fn signs_of_cosines() {
        // c = 2cos(2πj/9): positive for j = 1, 2; negative for j = 3, 4
        for (j, s) in [(1, 1), (2, 1), (4, -1), (5, -1), (7, 1), (8, 1)] {
            let e = Embedding::new(9, j);
            let x = e.field.x_power(1);
            let c = e.field.add(&x, &e.field.conj(&x));
            assert_eq!(e.real_sign(&c), s, "j = {j}");
        }
        // 2cos(2π/6) = 1 exactly: c - 1 = 0 would be the zero element, c - 1/2 > 0
        let e = Embedding::new(6, 1);
        let x = e.field.x_power(1);
        let c = e.field.add(&x, &e.field.conj(&x));
        let shifted = e.field.sub(&c, &e.field.scale(&e.field.one(), &q(1, 2)));
        assert_eq!(e.real_sign(&shifted), 1);
        assert!(e.field.sub(&c, &e.field.one()).is_zero());
    }

    #[test]
    fn tight_sign() {
        // 2cos(2π/7) ≈ 1.2469796; compare with 1.2469796 and 1.2469797
        let e = Embedding::new(7, 1);
        let x = e.field.x_power(1);
        let c = e.field.add(&x, &e.field.conj(&x));
        let below = e
            .field
            .sub(&c, &e.field.scale(&e.field.one(), &q(12469796, 10000000)));
        let above = e
            .field
            .sub(&c, &e.field.scale(&e.field.one(), &q(12469797, 10000000)));
        assert_eq!(e.real_sign(&below), 1);
        assert_eq!(e.real_sign(&above), -1);
    }

    #[test]
    fn real_symmetric_signature() {
        let e = Embedding::new(2, 1);
        let f = &e.field;
        let m = |v: i64| f.from_int(&BigInt::from(v));
        let h = vec![vec![m(-4), m(2)], vec![m(2), m(-4)]];
        assert_eq!(hermitian_signature(&e, h), Some(-2));
        let h = vec![vec![m(0), m(1)], vec![m(1), m(0)]];
        assert_eq!(hermitian_signature(&e, h), Some(0));
        let h = vec![vec![m(1), m(1)], vec![m(1), m(1)]];
        assert_eq!(hermitian_signature(&e, h), None);
    }
}
