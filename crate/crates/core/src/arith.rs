//! Small number-theoretic helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// `Some((p, k))` when `q = p^k` with `p` prime and `k ≥ 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = smallest_prime_factor(q);
    let mut r = q;
    let mut k = 0;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

pub fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

pub fn reduce_mod(x: &BigInt, q: u64) -> u64 {
    x.mod_floor(&BigInt::from(q)).to_u64().unwrap()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Units of ℤ/q in increasing order.
pub fn units(q: u64) -> Vec<u64> {
    (1..q.max(2)).filter(|&u| gcd(u, q) == 1).collect()
}

/// Additive order of `x` in ℤ/q.
pub fn additive_order(x: u64, q: u64) -> u64 {
    q / gcd(x % q, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(0), None);
    }

    #[test]
    fn phi_and_units() {
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(18), 6);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(units(9), vec![1, 2, 4, 5, 7, 8]);
        assert_eq!(additive_order(3, 9), 3);
        assert_eq!(additive_order(0, 9), 1);
        assert_eq!(additive_order(4, 9), 9);
    }
}
