//! Gilmer's counting argument and 4-genus certificates.
//!
//! If `g₄(K) ≤ g` then `H₁(Σ_K) ≅ A₁ ⊕ A₂` with `A₁` generated by `2g`
//! elements and some `B ≤ A₂`, `|B|² = |A₂|`, such that every prime-power
//! character vanishing on `A₁ ⊕ B` has small Casson–Gordon signature. Those
//! characters form a group of order at least `(|H| / |A₁|)^{1/2}`. Showing that
//! the characters with small signature cannot contain such a group gives
//! `g₄(K) > g`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{additive_order, prime_power, units};
use crate::cover::Character;
use crate::error::{Error, Result};
use crate::infection::{verify_separation_profile, InfectionConfig, LedgerEntry};

pub const DEFAULT_SUBGROUP_CAP: u64 = 100_000;

/// Invariant factors of a finite abelian `p`-group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianShape {
    prime: u64,
    /// Ascending, all `> 1`.
    factors: Vec<BigUint>,
}

impl AbelianShape {
    pub fn new(factors: &[BigUint]) -> Result<Self> {
        let mut fs: Vec<BigUint> = factors.iter().filter(|f| !f.is_one()).cloned().collect();
        fs.sort();
        let mut prime = None;
        for f in &fs {
            let p = f
                .to_u64()
                .and_then(prime_power)
                .map(|(p, _)| p)
                .ok_or_else(|| Error::invalid(format!("invariant factor {f} is not a prime power")))?;
            if prime.is_some_and(|q| q != p) {
                return Err(Error::invalid("invariant factors involve more than one prime"));
            }
            prime = Some(p);
        }
        Ok(AbelianShape {
            prime: prime.unwrap_or(1),
            factors: fs,
        })
    }

    pub fn from_u64(factors: &[u64]) -> Result<Self> {
        Self::new(&factors.iter().map(|&f| BigUint::from(f)).collect::<Vec<_>>())
    }

    /// The prime, or 1 for the trivial group.
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn factors(&self) -> &[BigUint] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> BigUint {
        self.factors.last().cloned().unwrap_or_else(BigUint::one)
    }

    /// Shape of the direct sum of `m` copies.
    pub fn power(&self, m: usize) -> Self {
        let mut factors: Vec<BigUint> = (0..m).flat_map(|_| self.factors.iter().cloned()).collect();
        factors.sort();
        AbelianShape {
            prime: self.prime,
            factors,
        }
    }
}

/// `⌊(|H| / max|A₁|)^{1/2}⌋`, where `max|A₁|` is the product of the `2g`
/// largest invariant factors: the fewest characters that can vanish on
/// `A₁ ⊕ B`.
pub fn min_annihilator_order(h: &AbelianShape, g: u64) -> BigUint {
    let take = (2 * g).min(h.rank() as u64) as usize;
    let a1: BigUint = h.factors.iter().rev().take(take).product();
    (h.order() / a1).sqrt()
}

/// A subgroup of `(ℤ/q)ⁿ` as its sorted element list.
pub type Subgroup = Vec<Vec<u64>>;

fn add_scaled(acc: &mut [u64], x: &[u64], k: u64, q: u64) {
    for (a, v) in acc.iter_mut().zip(x) {
        *a = (*a + k * v) % q;
    }
}

fn element_order(x: &[u64], q: u64) -> u64 {
    x.iter().map(|&v| additive_order(v, q)).max().unwrap_or(1)
}

fn cyclic(x: &[u64], ord: u64, q: u64) -> Subgroup {
    let mut out = Vec::with_capacity(ord as usize);
    let mut cur = vec![0; x.len()];
    for _ in 0..ord {
        out.push(cur.clone());
        add_scaled(&mut cur, x, 1, q);
    }
    out.sort_unstable();
    out
}

/// Every subgroup of order `target ∈ {p, p²}` of a finite subgroup `G` of
/// `(ℤ/q)ⁿ`, `q` a power of `p`, listed once each in canonical order.
///
/// Cyclic subgroups come from elements of order `target`; when
/// `target = p²` the elementary subgroups `(ℤ/p)²` are spanned by pairs of
/// independent elements of order `p`.
pub fn subgroups_of_order(group: &[Vec<u64>], q: u64, target: u64, cap: u64) -> Result<Vec<Subgroup>> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if target != p && target != p * p {
        return Err(Error::UnsupportedSubgroupOrder(target));
    }
    let mut found: BTreeSet<Subgroup> = BTreeSet::new();
    let check_cap = |n: usize| {
        if n as u64 > cap {
            Err(Error::cap(format!("more than {cap} subgroups"), cap))
        } else {
            Ok(())
        }
    };
    let unit_list = units(target);
    for x in group {
        if element_order(x, q) != target {
            continue;
        }
        // keep only the least generator of each cyclic subgroup
        let is_least = unit_list.iter().all(|&u| {
            let y: Vec<u64> = x.iter().map(|&v| v * u % q).collect();
            *x <= y
        });
        if is_least {
            found.insert(cyclic(x, target, q));
            check_cap(found.len())?;
        }
    }
    if target == p * p {
        let order_p: Vec<&Vec<u64>> = group.iter().filter(|x| element_order(x, q) == p).collect();
        let mut elementary: BTreeSet<Subgroup> = BTreeSet::new();
        for (i, x) in order_p.iter().enumerate() {
            for y in &order_p[i + 1..] {
                let mut span = Vec::with_capacity(target as usize);
                for a in 0..p {
                    for b in 0..p {
                        let mut e = vec![0; x.len()];
                        add_scaled(&mut e, x, a, q);
                        add_scaled(&mut e, y, b, q);
                        span.push(e);
                    }
                }
                span.sort_unstable();
                span.dedup();
                if span.len() as u64 == target {
                    elementary.insert(span);
                    check_cap(found.len() + elementary.len())?;
                }
            }
        }
        found.extend(elementary);
    }
    Ok(found.into_iter().collect())
}

/// Closed under addition and negation and containing zero.
pub fn is_subgroup(set: &[Vec<u64>], q: u64) -> bool {
    let members: BTreeSet<&Vec<u64>> = set.iter().collect();
    let Some(first) = set.first() else {
        return false;
    };
    if !members.contains(&vec![0; first.len()]) {
        return false;
    }
    set.iter().all(|x| {
        set.iter().all(|y| {
            let s: Vec<u64> = x.iter().zip(y).map(|(a, b)| (a + b) % q).collect();
            members.contains(&s)
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMethod {
    /// `|S| < n`.
    Cardinality,
    /// Every subgroup of order exactly `n` was tested against `S`.
    Enumeration,
    /// `n = 1`: only the trivial subgroup is needed.
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum GilmerVerdict {
    Contradiction {
        method: CheckMethod,
        #[serde(with = "crate::bigjson::biguint")]
        small_set_size: BigUint,
        #[serde(with = "crate::bigjson::biguint")]
        bound: BigUint,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subgroups_checked: Option<u64>,
    },
    NoObstruction {
        method: CheckMethod,
        witness: Subgroup,
    },
}

impl GilmerVerdict {
    pub fn is_contradiction(&self) -> bool {
        matches!(self, GilmerVerdict::Contradiction { .. })
    }
}

/// Does the small set `S ⊆ G` contain a subgroup of order at least `n`?
///
/// Any `p`-group of order `≥ n` contains one of order exactly `n`, so it is
/// enough to test subgroups of order `n`.
pub fn gilmer_contradiction_check(
    group: &[Vec<u64>],
    small: &[Vec<u64>],
    q: u64,
    n: &BigUint,
    subgroup_cap: u64,
) -> Result<GilmerVerdict> {
    let size = BigUint::from(small.len());
    let members: BTreeSet<&Vec<u64>> = small.iter().collect();
    if n.is_one() {
        let zero = vec![0; group.first().map_or(0, Vec::len)];
        return Ok(if members.contains(&zero) {
            GilmerVerdict::NoObstruction {
                method: CheckMethod::Trivial,
                witness: vec![zero],
            }
        } else {
            GilmerVerdict::Contradiction {
                method: CheckMethod::Trivial,
                small_set_size: size,
                bound: n.clone(),
                subgroups_checked: None,
            }
        });
    }
    if &size < n {
        return Ok(GilmerVerdict::Contradiction {
            method: CheckMethod::Cardinality,
            small_set_size: size,
            bound: n.clone(),
            subgroups_checked: None,
        });
    }
    let target = n
        .to_u64()
        .ok_or_else(|| Error::UnsupportedSubgroupOrder(u64::MAX))?;
    let subgroups = subgroups_of_order(group, q, target, subgroup_cap)?;
    for h in &subgroups {
        if h.iter().all(|x| members.contains(x)) {
            return Ok(GilmerVerdict::NoObstruction {
                method: CheckMethod::Enumeration,
                witness: h.clone(),
            });
        }
    }
    Ok(GilmerVerdict::Contradiction {
        method: CheckMethod::Enumeration,
        small_set_size: size,
        bound: n.clone(),
        subgroups_checked: Some(subgroups.len() as u64),
    })
}

/// Characters of a connected sum satisfying every condition: tuples of
/// per-summand small-set members. Counted without building the tuples.
#[derive(Clone, Debug)]
pub struct ProductSmallSet {
    pub per_copy: Vec<Vec<Character>>,
}

impl ProductSmallSet {
    pub fn new(per_copy: Vec<Vec<Character>>) -> Self {
        ProductSmallSet { per_copy }
    }

    pub fn count(&self) -> BigUint {
        self.per_copy.iter().map(|s| BigUint::from(s.len())).product()
    }

    /// Concatenated value vectors, in lexicographic order.
    pub fn materialize(&self, cap: u64) -> Result<Vec<Vec<u64>>> {
        let count = self.count();
        if count > BigUint::from(cap) {
            return Err(Error::cap(count, cap));
        }
        let mut out: Vec<Vec<u64>> = vec![Vec::new()];
        for set in &self.per_copy {
            out = out
                .iter()
                .flat_map(|prefix| {
                    set.iter().map(move |c| {
                        let mut v = prefix.clone();
                        v.extend_from_slice(c.values());
                        v
                    })
                })
                .collect();
        }
        Ok(out)
    }
}

pub fn product_small_set(per_copy: Vec<Vec<Character>>) -> ProductSmallSet {
    ProductSmallSet::new(per_copy)
}

pub const CONDITIONAL_ON: &str = "c >= max(c0, 2)";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusCertificate {
    #[serde(with = "crate::bigjson::biguint_vec")]
    pub invariant_factors: Vec<BigUint>,
    pub modulus: u64,
    pub copies: usize,
    pub genus: u64,
    /// Per-summand small set; the small set of the sum is its `copies`-fold
    /// product.
    pub small_set: Vec<Vec<u64>>,
    #[serde(with = "crate::bigjson::biguint")]
    pub small_set_size: BigUint,
    #[serde(with = "crate::bigjson::biguint")]
    pub annihilator_bound: BigUint,
    pub subgroup_check: Option<GilmerVerdict>,
    pub separation_ledger: Vec<LedgerEntry>,
    pub conclusion: Option<String>,
    pub conditional_on: String,
    pub failures: Vec<String>,
}

impl GenusCertificate {
    pub fn is_certified(&self) -> bool {
        self.conclusion.is_some()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub characters: u64,
    pub subgroups: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            characters: crate::linalg::DEFAULT_ENUMERATION_CAP,
            subgroups: DEFAULT_SUBGROUP_CAP,
        }
    }
}

fn character_shape(cfg: &InfectionConfig) -> Result<AbelianShape> {
    let factors: Vec<BigUint> = cfg
        .base
        .invariant_factors()
        .iter()
        .map(|f| f.magnitude().clone())
        .collect();
    AbelianShape::new(&factors)
}

/// Assembles the argument for `g₄ ≥ g + 1` on the connected sum of `copies`
/// infected knots described by `cfg`.
///
/// Sub-check failures are recorded in the certificate, which then carries no
/// conclusion; only cap and input errors abort.
pub fn certify_genus_lower_bound(
    cfg: &InfectionConfig,
    copies: usize,
    g: u64,
    caps: Caps,
) -> Result<GenusCertificate> {
    if copies == 0 {
        return Err(Error::invalid("copies must be at least 1"));
    }
    let q = cfg.modulus;
    let mut failures = Vec::new();

    let per_copy = cfg.small_character_set(caps.characters)?;
    let product = ProductSmallSet::new(vec![per_copy.clone(); copies]);
    let small_set_size = product.count();

    let profile = cfg.signature_profile()?;
    let ledger = verify_separation_profile(cfg, &profile, copies, g);
    if !ledger.separated {
        let bad: Vec<String> = ledger
            .entries
            .iter()
            .filter(|e| !e.holds_c_ge_2)
            .map(|e| format!("({}, {})", e.copy, e.case))
            .collect();
        failures.push(if ledger.entries.is_empty() {
            "separation: no infection sites".to_string()
        } else {
            format!(
                "separation: cases {} are not positive for all c >= 2",
                bad.join(", ")
            )
        });
    }

    let base_shape = character_shape(cfg)?;
    let shape = base_shape.power(copies);
    let n = min_annihilator_order(&shape, g);
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let dual_ok =
        shape.rank() == 0 || (shape.prime() == p && (BigUint::from(q) % shape.exponent()).is_zero());
    let subgroup_check = if !dual_ok {
        failures.push(format!(
            "characters to Z/{q} do not see all of H1 (invariant factors must be powers of {p} dividing {q})"
        ));
        None
    } else if copies == 1 {
        let group: Vec<Vec<u64>> = cfg
            .base
            .enumerate_characters(q, caps.characters)?
            .into_iter()
            .map(|c| c.values().to_vec())
            .collect();
        let small: Vec<Vec<u64>> = per_copy.iter().map(|c| c.values().to_vec()).collect();
        Some(gilmer_contradiction_check(&group, &small, q, &n, caps.subgroups)?)
    } else if small_set_size < n {
        Some(GilmerVerdict::Contradiction {
            method: CheckMethod::Cardinality,
            small_set_size: small_set_size.clone(),
            bound: n.clone(),
            subgroups_checked: None,
        })
    } else {
        let small: Vec<Vec<u64>> = per_copy.iter().map(|c| c.values().to_vec()).collect();
        failures.push(if is_subgroup(&small, q) {
            // a product of subgroups is a subgroup
            format!(
                "subgroups: the small set of each summand is a subgroup, so the product small set \
                 is a subgroup of order {small_set_size} >= {n} (no obstruction)"
            )
        } else {
            format!(
                "subgroups: product small set has {small_set_size} >= {n} elements; \
                 subgroup enumeration on connected sums is not supported"
            )
        });
        None
    };
    if let Some(GilmerVerdict::NoObstruction { witness, .. }) = &subgroup_check {
        failures.push(format!(
            "subgroups: the small set contains a subgroup of order {} (no obstruction)",
            witness.len()
        ));
    }

    let conclusion = failures
        .is_empty()
        .then(|| format!("g4 >= {} for all {}", g + 1, CONDITIONAL_ON));
    Ok(GenusCertificate {
        invariant_factors: base_shape.factors().to_vec(),
        modulus: q,
        copies,
        genus: g,
        small_set: per_copy.iter().map(|c| c.values().to_vec()).collect(),
        small_set_size,
        annihilator_bound: n,
        subgroup_check,
        separation_ledger: ledger.entries,
        conclusion,
        conditional_on: CONDITIONAL_ON.to_string(),
        failures,
    })
}

/// Re-checks a certificate against its configuration without repeating the
/// enumerations: small-set membership, witness closure, the annihilator
/// bound and every ledger inequality. Returns the list of problems found.
pub fn check_certificate(cfg: &InfectionConfig, cert: &GenusCertificate) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    let q = cfg.modulus;
    if cert.modulus != q {
        problems.push(format!(
            "modulus {} does not match the configuration ({q})",
            cert.modulus
        ));
    }
    let base_shape = character_shape(cfg)?;
    if cert.invariant_factors != base_shape.factors() {
        problems.push("invariant factors do not match the configuration".into());
    }
    for v in &cert.small_set {
        match cfg.base.character(q, v.clone()) {
            Ok(chi) => {
                if !cfg.conditions_satisfied(&chi)? {
                    problems.push(format!("small-set member {v:?} violates a site condition"));
                }
            }
            Err(_) => problems.push(format!("small-set member {v:?} is not a character")),
        }
    }
    let distinct: BTreeSet<&Vec<u64>> = cert.small_set.iter().collect();
    if distinct.len() != cert.small_set.len() {
        problems.push("small set has repeated members".into());
    }
    if BigUint::from(cert.small_set.len()).pow(cert.copies as u32) != cert.small_set_size {
        problems.push("small_set_size is not the product of the per-copy sizes".into());
    }
    let n = min_annihilator_order(&base_shape.power(cert.copies), cert.genus);
    if n != cert.annihilator_bound {
        problems.push(format!("annihilator bound should be {n}"));
    }
    match &cert.subgroup_check {
        Some(GilmerVerdict::Contradiction {
            method,
            small_set_size,
            bound,
            ..
        }) => {
            if bound != &n || small_set_size != &cert.small_set_size {
                problems.push("subgroup check quotes the wrong sizes".into());
            }
            if *method == CheckMethod::Cardinality && small_set_size >= bound {
                problems.push("cardinality shortcut used with |S| >= n".into());
            }
        }
        Some(GilmerVerdict::NoObstruction { witness, .. }) => {
            if !is_subgroup(witness, q) || !witness.iter().all(|w| distinct.contains(w)) {
                problems.push("witness is not a subgroup of the small set".into());
            }
        }
        None => {}
    }
    let profile = cfg.signature_profile()?;
    let ledger = verify_separation_profile(cfg, &profile, cert.copies, cert.genus);
    if ledger.entries != cert.separation_ledger {
        problems.push("separation ledger does not match the recomputed ledger".into());
    }
    for e in &cert.separation_ledger {
        if e.bound.positive_for_c_ge_2() != e.holds_c_ge_2 {
            problems.push(format!(
                "ledger case ({}, {}) misreports its inequality",
                e.copy, e.case
            ));
        }
    }
    let all_pass = ledger.separated
        && cert.failures.is_empty()
        && cert
            .subgroup_check
            .as_ref()
            .is_some_and(GilmerVerdict::is_contradiction);
    if cert.conclusion.is_some() != all_pass {
        problems.push("conclusion present without every sub-check passing".into());
    }
    if cert.conditional_on != CONDITIONAL_ON {
        problems.push("certificate must be conditional on c >= max(c0, 2)".into());
    }
    Ok(problems)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_group(q: u64, n: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u64>| {
                    (0..q).map(move |a| {
                        let mut w = v.clone();
                        w.push(a);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn annihilator_orders() {
        let h = AbelianShape::from_u64(&[9, 9, 9, 9]).unwrap();
        assert_eq!(min_annihilator_order(&h, 1), BigUint::from(9u32));
        assert_eq!(min_annihilator_order(&h, 0), BigUint::from(81u32));
        assert_eq!(min_annihilator_order(&h, 5), BigUint::from(1u32));
        for m in 1..=4u32 {
            let big = h.power(2 * m as usize);
            assert_eq!(
                min_annihilator_order(&big, 3 * m as u64 - 1),
                BigUint::from(3u32).pow(2 * m + 2)
            );
        }
    }

    #[test]
    fn shapes() {
        assert!(AbelianShape::from_u64(&[9, 6]).is_err());
        assert!(AbelianShape::from_u64(&[9, 5]).is_err());
        let s = AbelianShape::from_u64(&[1, 27, 3]).unwrap();
        assert_eq!(s.prime(), 3);
        assert_eq!(s.factors(), &[BigUint::from(3u32), BigUint::from(27u32)]);
        assert_eq!(AbelianShape::from_u64(&[]).unwrap().order(), BigUint::one());
    }

    #[test]
    fn small_subgroup_counts() {
        assert_eq!(subgroups_of_order(&full_group(9, 1), 9, 9, 100).unwrap().len(), 1);
        assert_eq!(
            subgroups_of_order(&full_group(3, 4), 3, 9, 1000).unwrap().len(),
            130
        );
        assert_eq!(
            subgroups_of_order(&full_group(3, 2), 3, 3, 1000).unwrap().len(),
            4
        );
        assert!(matches!(
            subgroups_of_order(&full_group(3, 2), 3, 27, 1000),
            Err(Error::UnsupportedSubgroupOrder(27))
        ));
        assert!(matches!(
            subgroups_of_order(&full_group(3, 4), 3, 9, 10),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn subgroups_of_z9_squared() {
        // cyclic: (81 - 9) / 6 = 12; elementary: the 3-torsion itself
        let subs = subgroups_of_order(&full_group(9, 2), 9, 9, 1000).unwrap();
        assert_eq!(subs.len(), 13);
        assert!(subs.iter().all(|h| h.len() == 9 && is_subgroup(h, 9)));
    }

    #[test]
    fn contradiction_check() {
        let g = full_group(9, 2);
        let n = BigUint::from(9u32);
        let small = vec![vec![0, 0], vec![3, 0], vec![6, 0]];
        assert!(gilmer_contradiction_check(&g, &small, 9, &n, 1000)
            .unwrap()
            .is_contradiction());
        let v = gilmer_contradiction_check(&g, &g, 9, &n, 1000).unwrap();
        assert!(matches!(v, GilmerVerdict::NoObstruction { .. }));
        // nine elements but not a subgroup
        let odd: Vec<Vec<u64>> = (0..9).map(|a| vec![a, a * a % 9]).collect();
        let v = gilmer_contradiction_check(&g, &odd, 9, &n, 1000).unwrap();
        assert!(matches!(
            v,
            GilmerVerdict::Contradiction {
                method: CheckMethod::Enumeration,
                ..
            }
        ));
        let one = BigUint::one();
        assert!(!gilmer_contradiction_check(&g, &small, 9, &one, 1000)
            .unwrap()
            .is_contradiction());
    }

    #[test]
    fn product_counts() {
        let c = |v: u64| {
            serde_json::from_value::<Character>(serde_json::json!({"modulus": 9, "values": [v]})).unwrap()
        };
        let s = vec![c(0), c(3), c(6)];
        assert_eq!(product_small_set(vec![s.clone()]).count(), BigUint::from(3u32));
        let two = product_small_set(vec![s.clone(), s.clone()]);
        assert_eq!(two.count(), BigUint::from(9u32));
        let listed = two.materialize(100).unwrap();
        assert_eq!(listed.len(), 9);
        assert_eq!(listed[1], vec![0, 3]);
        let four = product_small_set(vec![s; 4]);
        assert_eq!(four.count(), BigUint::from(81u32));
        assert!(four.materialize(80).is_err());
    }
}
