//! Satellite corrections to Casson–Gordon signatures of infected knots.
//!
//! Infecting a base knot `K` along curves `γ_i` (and `γ_i'`, carrying the
//! reversed companion) by companions `J_i` changes the Casson–Gordon signature
//! of a character `χ` by
//!
//! ```text
//! 2σ_{J_0}(ω^{χ(z_0)}) + 2 Σ_i [σ_{J_i}(ω^{χ(z_i)}) − σ_{J_i}(ω^{χ(z_i')})]
//! ```
//!
//! where `z_i` are the lifted classes in `H₁(Σ_K)` and `ω = e^{2πi/q}`. Each
//! companion is `copies_per_c · c` copies of a fixed knot expression, with `c`
//! a formal positive integer; corrections are reported per unit of `c`.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::prime_power;
use crate::bigjson;
use crate::cover::{Character, CoverPresentation, HomologyClass};
use crate::error::{Error, Result};
use crate::knot::{parse_knot_expr_with, FsResolver, KnotExpr, RationalAngle, SignatureCache};

#[derive(Clone, Debug)]
pub struct InfectionSite {
    pub label: u32,
    pub z: HomologyClass,
    /// `None` for a single-curve site.
    pub z_prime: Option<HomologyClass>,
    pub companion: KnotExpr,
    /// The companion is this many times `c` copies of `companion`.
    pub copies_per_c: BigInt,
}

impl InfectionSite {
    pub fn is_paired(&self) -> bool {
        self.z_prime.is_some()
    }
}

/// Extra scaling for the `k`-th summand of a connected sum of infected knots:
/// its companions are multiplied by `factor · 2^{log2_step · k}` (k from 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyRescale {
    #[serde(with = "bigjson")]
    pub factor: BigInt,
    pub log2_step: u32,
}

impl CopyRescale {
    pub fn multiplier(&self, k: usize) -> BigInt {
        &self.factor << (self.log2_step as usize * k)
    }
}

#[derive(Clone, Debug)]
pub struct InfectionConfig {
    pub base: CoverPresentation,
    /// Sorted by label.
    pub sites: Vec<InfectionSite>,
    pub modulus: u64,
    pub copy_rescale: Option<CopyRescale>,
}

impl InfectionConfig {
    pub fn new(
        base: CoverPresentation,
        mut sites: Vec<InfectionSite>,
        modulus: u64,
        copy_rescale: Option<CopyRescale>,
    ) -> Result<Self> {
        if prime_power(modulus).is_none() {
            return Err(Error::NotPrimePower(modulus));
        }
        sites.sort_by_key(|s| s.label);
        if sites.windows(2).any(|w| w[0].label == w[1].label) {
            return Err(Error::invalid("infection site labels must be distinct"));
        }
        let n = base.generator_count();
        for s in &sites {
            for z in std::iter::once(&s.z).chain(&s.z_prime) {
                if z.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: z.len(),
                    });
                }
            }
            if s.copies_per_c.is_negative() {
                return Err(Error::invalid(format!(
                    "site {}: copies_per_c must be >= 0",
                    s.label
                )));
            }
        }
        if let Some(r) = &copy_rescale {
            if !r.factor.is_positive() {
                return Err(Error::invalid("copy_rescale.factor must be positive"));
            }
        }
        Ok(InfectionConfig {
            base,
            sites,
            modulus,
            copy_rescale,
        })
    }

    /// Companion multiplier for summand `k` of a connected sum.
    pub fn copy_multiplier(&self, k: usize) -> BigInt {
        match &self.copy_rescale {
            Some(r) => r.multiplier(k),
            None => BigInt::one(),
        }
    }

    /// Parses a configuration document.
    ///
    /// `base` is either the string `"paper"` (the bundled dataset), a matrix
    /// object `{"rows": …}` holding a Seifert matrix, or `{"file": PATH}`.
    /// Relative paths, including `seifert(PATH)` atoms in companions, are
    /// resolved against `dir`.
    pub fn from_json(v: &Value, dir: &Path) -> Result<Self> {
        let raw: RawConfig = serde_json::from_value(v.clone())?;
        let base = match &raw.base {
            Value::String(s) if s == "paper" => crate::dataset::paper_cover()?,
            Value::Object(o) if o.contains_key("rows") => {
                let m = crate::linalg::IntMatrix::from_json_value(&raw.base)?;
                CoverPresentation::from_seifert(&crate::knot::SeifertKnot::new(m)?)?
            }
            Value::Object(o) if o.contains_key("file") => {
                let path = o["file"]
                    .as_str()
                    .ok_or_else(|| Error::invalid("base.file must be a string"))?;
                let m = crate::linalg::IntMatrix::load(dir.join(path))?;
                CoverPresentation::from_seifert(&crate::knot::SeifertKnot::new(m)?)?
            }
            _ => {
                return Err(Error::invalid(
                    "base must be \"paper\", a matrix {\"rows\": ...} or {\"file\": PATH}",
                ))
            }
        };
        let resolver = FsResolver::new(dir);
        let sites = raw
            .sites
            .into_iter()
            .map(|s| {
                Ok(InfectionSite {
                    label: s.label,
                    z: s.z,
                    z_prime: s.z_prime,
                    companion: parse_knot_expr_with(&s.companion, &resolver)?,
                    copies_per_c: s.copies_per_c,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        InfectionConfig::new(base, sites, raw.modulus, raw.copy_rescale)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::from_json(&v, dir)
    }

    fn check_character(&self, chi: &Character) -> Result<()> {
        if chi.modulus() != self.modulus {
            return Err(Error::MixedModuli(self.modulus, chi.modulus()));
        }
        let n = self.base.generator_count();
        if chi.values().len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: chi.values().len(),
            });
        }
        Ok(())
    }

    /// Per site: `χ(z) = 0` for a single curve, `χ(z) = ±χ(z')` for a pair.
    pub fn conditions(&self, chi: &Character) -> Result<Vec<bool>> {
        self.check_character(chi)?;
        let q = self.modulus;
        self.sites
            .iter()
            .map(|s| {
                let a = chi.evaluate(&s.z)?;
                Ok(match &s.z_prime {
                    None => a == 0,
                    Some(zp) => {
                        let b = chi.evaluate(zp)?;
                        a == b || (a + b) % q == 0
                    }
                })
            })
            .collect()
    }

    pub fn conditions_satisfied(&self, chi: &Character) -> Result<bool> {
        Ok(self.conditions(chi)?.into_iter().all(|ok| ok))
    }

    /// Characters satisfying every site condition, in canonical order.
    pub fn small_character_set(&self, cap: u64) -> Result<Vec<Character>> {
        let mut out = Vec::new();
        for chi in self.base.enumerate_characters(self.modulus, cap)? {
            if self.conditions_satisfied(&chi)? {
                out.push(chi);
            }
        }
        Ok(out)
    }

    pub fn signature_profile(&self) -> Result<Vec<SiteProfile>> {
        let mut cache = SignatureCache::new();
        self.sites
            .iter()
            .map(|s| SiteProfile::compute(s, self.modulus, &mut cache))
            .collect()
    }

    /// Correction per unit `c` for one summand (multiplier 1).
    pub fn cg_correction(&self, chi: &Character) -> Result<BigInt> {
        let profile = self.signature_profile()?;
        cg_correction_with(self, &profile, chi)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    base: Value,
    modulus: u64,
    sites: Vec<RawSite>,
    #[serde(default)]
    copy_rescale: Option<CopyRescale>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSite {
    label: u32,
    z: HomologyClass,
    #[serde(default)]
    z_prime: Option<HomologyClass>,
    companion: String,
    #[serde(with = "bigjson")]
    copies_per_c: BigInt,
}

/// Correction using precomputed signature tables.
pub fn cg_correction_with(cfg: &InfectionConfig, profile: &[SiteProfile], chi: &Character) -> Result<BigInt> {
    cfg.check_character(chi)?;
    let mut total = BigInt::zero();
    for (site, prof) in cfg.sites.iter().zip(profile) {
        let a = chi.evaluate(&site.z)? as usize;
        let mut term = prof.sigma[a].clone();
        if let Some(zp) = &site.z_prime {
            let b = chi.evaluate(zp)? as usize;
            term -= &prof.sigma[b];
        }
        total += 2 * term;
    }
    Ok(total)
}

/// Scaled signatures `σ_{J}(ω^a)`, `a = 0..q`, of one site's companion per
/// unit `c`, with the summary statistics the separation ledger needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiteProfile {
    pub label: u32,
    pub paired: bool,
    /// Indexed by the exponent `a`; `sigma[0] = 0` by the `ω = 1` convention.
    #[serde(with = "bigjson::vec")]
    pub sigma: Vec<BigInt>,
    /// `max_{a≠0} |σ(a)|`.
    #[serde(with = "bigjson")]
    pub max_magnitude: BigInt,
    /// `min_{a≠0} |σ(a)|`.
    #[serde(with = "bigjson")]
    pub min_nonzero: BigInt,
    /// `min |σ(a) − σ(b)|` over `a ≠ ±b`.
    #[serde(with = "bigjson")]
    pub min_violation_gap: BigInt,
    /// `max |σ(a) − σ(b)|`.
    #[serde(with = "bigjson")]
    pub max_gap: BigInt,
}

impl SiteProfile {
    fn compute(site: &InfectionSite, q: u64, cache: &mut SignatureCache) -> Result<Self> {
        let mut sigma = vec![BigInt::zero()];
        for a in 1..q {
            let s = RationalAngle::from_residue(a, q).unwrap();
            let v = cache.signature(&site.companion, s).map_err(|e| match e {
                Error::SingularOmega { n } => Error::SingularOmegaAtSite { label: site.label, n },
                other => other,
            })?;
            sigma.push(&site.copies_per_c * v);
        }
        Ok(Self::from_table(site.label, site.is_paired(), sigma, q))
    }

    pub fn from_table(label: u32, paired: bool, sigma: Vec<BigInt>, q: u64) -> Self {
        let nonzero = || sigma.iter().skip(1).map(Signed::abs);
        let max_magnitude = nonzero().max().unwrap_or_default();
        let min_nonzero = nonzero().min().unwrap_or_default();
        let mut min_violation_gap: Option<BigInt> = None;
        let mut max_gap = BigInt::zero();
        for a in 0..q as usize {
            for b in a + 1..q as usize {
                let d = (&sigma[a] - &sigma[b]).abs();
                if (a + b) as u64 % q != 0 && min_violation_gap.as_ref().is_none_or(|m| d < *m) {
                    min_violation_gap = Some(d.clone());
                }
                if d > max_gap {
                    max_gap = d;
                }
            }
        }
        SiteProfile {
            label,
            paired,
            sigma,
            max_magnitude,
            min_nonzero,
            min_violation_gap: min_violation_gap.unwrap_or_default(),
            max_gap,
        }
    }

    /// Least `|correction| / 2` when this site's condition fails.
    pub fn violation_gain(&self) -> &BigInt {
        if self.paired {
            &self.min_violation_gap
        } else {
            &self.min_nonzero
        }
    }

    /// Largest `|correction| / 2` this site can contribute.
    pub fn contribution_bound(&self) -> &BigInt {
        if self.paired {
            &self.max_gap
        } else {
            &self.max_magnitude
        }
    }
}

/// `slope · c + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearInC {
    #[serde(with = "bigjson")]
    pub slope: BigInt,
    #[serde(with = "bigjson")]
    pub intercept: BigInt,
}

impl LinearInC {
    /// Positive at every integer `c ≥ 2`.
    pub fn positive_for_c_ge_2(&self) -> bool {
        !self.slope.is_negative() && (BigInt::from(2) * &self.slope + &self.intercept).is_positive()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    /// Summand index in a connected sum (0 for a single knot).
    pub copy: usize,
    /// Label of the highest violated site.
    pub case: u32,
    #[serde(flatten)]
    pub bound: LinearInC,
    pub holds_c_ge_2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationLedger {
    pub entries: Vec<LedgerEntry>,
    pub separated: bool,
}

/// Lower bounds on `|σ(K_J, χ) + σ(K_J)|` for characters failing some site
/// condition, on a connected sum of `copies` infected knots.
///
/// Cases are ordered by (summand, site label); the case of a character is its
/// highest failing pair. Conditions above it hold and contribute nothing, the
/// failing site contributes at least twice its violation gain, every lower
/// site at most twice its contribution bound, and the base knot's own
/// Casson–Gordon terms at most `c` per summand. Each case must exceed `4g`
/// for all `c ≥ 2`.
pub fn verify_separation_profile(
    cfg: &InfectionConfig,
    profile: &[SiteProfile],
    copies: usize,
    g: u64,
) -> SeparationLedger {
    let mut entries = Vec::new();
    let mut accumulated = BigInt::zero();
    let intercept = -BigInt::from(4 * g);
    for k in 0..copies {
        let mult = cfg.copy_multiplier(k);
        for p in profile {
            let slope = 2 * &mult * p.violation_gain() - BigInt::from(copies) - &accumulated;
            let bound = LinearInC {
                slope,
                intercept: intercept.clone(),
            };
            entries.push(LedgerEntry {
                copy: k,
                case: p.label,
                holds_c_ge_2: bound.positive_for_c_ge_2(),
                bound,
            });
            accumulated += 2 * &mult * p.contribution_bound();
        }
    }
    let separated = !entries.is_empty() && entries.iter().all(|e| e.holds_c_ge_2);
    SeparationLedger { entries, separated }
}

/// Whether a set of characters is closed under negation and unit rescaling.
pub fn closed_under_units(set: &[Character]) -> bool {
    let members: BTreeSet<&Character> = set.iter().collect();
    set.iter().all(|c| {
        crate::arith::units(c.modulus())
            .into_iter()
            .all(|u| members.contains(&c.scale(u)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::{parse_knot_expr, seifert_matrix, SeifertKnot};

    const S: &str = "3*T(2,3) # 3*T(2,5) # T(2,7) # 5*mirror(T(2,9))";

    fn trefoil_base() -> CoverPresentation {
        CoverPresentation::from_seifert(&seifert_matrix(&parse_knot_expr("T(2,3)").unwrap()).unwrap())
            .unwrap()
    }

    fn site(label: u32, z: &[i64], zp: Option<&[i64]>, companion: &str, copies: i64) -> InfectionSite {
        InfectionSite {
            label,
            z: HomologyClass::from_i64(z),
            z_prime: zp.map(HomologyClass::from_i64),
            companion: parse_knot_expr(companion).unwrap(),
            copies_per_c: copies.into(),
        }
    }

    #[test]
    fn profile_of_footnote_knot() {
        let cfg = InfectionConfig::new(trefoil_base(), vec![site(0, &[1, 0], None, S, 1)], 9, None).unwrap();
        let p = &cfg.signature_profile().unwrap()[0];
        let want: Vec<BigInt> = [0, 2, 4, 8, 16, 16, 8, 4, 2].iter().map(|&x| x.into()).collect();
        assert_eq!(p.sigma, want);
        assert_eq!(p.max_magnitude, 16.into());
        assert_eq!(p.min_nonzero, 2.into());
        assert_eq!(p.min_violation_gap, 2.into());
        assert_eq!(p.max_gap, 16.into());
    }

    #[test]
    fn unknot_profile_is_flat() {
        let cfg = InfectionConfig::new(
            trefoil_base(),
            vec![site(1, &[1, 0], Some(&[0, 1]), "0*T(2,3)", 5)],
            9,
            None,
        )
        .unwrap();
        let p = &cfg.signature_profile().unwrap()[0];
        assert!(p.sigma.iter().all(Zero::is_zero));
        assert!(p.min_violation_gap.is_zero());
    }

    #[test]
    fn scaled_profile() {
        let cfg = InfectionConfig::new(
            trefoil_base(),
            vec![site(1, &[1, 0], Some(&[0, 1]), S, 32)],
            9,
            None,
        )
        .unwrap();
        assert_eq!(cfg.signature_profile().unwrap()[0].min_violation_gap, 64.into());
    }

    #[test]
    fn corrections_on_trefoil_cover() {
        let base = trefoil_base();
        let cfg = InfectionConfig::new(base.clone(), vec![site(0, &[1, 0], None, S, 1)], 3, None).unwrap();
        let chars = base.enumerate_characters(3, 100).unwrap();
        assert_eq!(cfg.cg_correction(&chars[0]).unwrap(), BigInt::zero());
        // χ(y_0) = 1: 2σ_S(ω_3) = 2σ_S(3/9)
        assert_eq!(cfg.cg_correction(&chars[1]).unwrap(), 16.into());
        assert_eq!(cfg.cg_correction(&chars[2]).unwrap(), 16.into());
        assert_eq!(cfg.small_character_set(100).unwrap(), vec![chars[0].clone()]);
    }

    #[test]
    fn conditions() {
        let base = trefoil_base();
        let cfg = InfectionConfig::new(
            base.clone(),
            vec![
                site(1, &[1, 0], Some(&[0, 1]), S, 1),
                site(0, &[0, 0], None, S, 1),
            ],
            3,
            None,
        )
        .unwrap();
        assert_eq!(cfg.sites[0].label, 0);
        let chars = base.enumerate_characters(3, 100).unwrap();
        // (1, 2): χ(z) = 1, χ(z') = 2 = -1
        assert_eq!(cfg.conditions(&chars[1]).unwrap(), vec![true, true]);
        assert!(closed_under_units(&cfg.small_character_set(100).unwrap()));
    }

    #[test]
    fn ledger_arithmetic() {
        let base = CoverPresentation::from_seifert(&SeifertKnot::unknot()).unwrap();
        let sites: Vec<InfectionSite> = (0..5)
            .map(|i| {
                let zp: Option<&[i64]> = if i == 0 { None } else { Some(&[]) };
                site(i, &[], zp, S, 1 << (5 * i))
            })
            .collect();
        let cfg = InfectionConfig::new(base.clone(), sites, 9, None).unwrap();
        let profile = cfg.signature_profile().unwrap();
        let ledger = verify_separation_profile(&cfg, &profile, 1, 1);
        assert!(ledger.separated);
        assert_eq!(ledger.entries[0].bound.slope, 3.into());
        assert_eq!(ledger.entries[0].bound.intercept, (-4).into());
        assert_eq!(ledger.entries[1].bound.slope, 95.into());

        let flat: Vec<InfectionSite> = (0..5)
            .map(|i| {
                let zp: Option<&[i64]> = if i == 0 { None } else { Some(&[]) };
                site(i, &[], zp, S, 1)
            })
            .collect();
        let cfg = InfectionConfig::new(base.clone(), flat, 9, None).unwrap();
        let profile = cfg.signature_profile().unwrap();
        assert!(!verify_separation_profile(&cfg, &profile, 1, 1).separated);

        let empty = InfectionConfig::new(base, vec![], 9, None).unwrap();
        assert!(!verify_separation_profile(&empty, &[], 1, 1).separated);
    }

    #[test]
    fn linear_in_c() {
        let l = |a: i64, b: i64| LinearInC {
            slope: a.into(),
            intercept: b.into(),
        };
        assert!(l(3, -4).positive_for_c_ge_2());
        assert!(!l(2, -4).positive_for_c_ge_2());
        assert!(!l(-1, 100).positive_for_c_ge_2());
        assert!(l(0, 1).positive_for_c_ge_2());
    }

    #[test]
    fn config_validation() {
        assert!(matches!(
            InfectionConfig::new(trefoil_base(), vec![], 6, None),
            Err(Error::NotPrimePower(6))
        ));
        let dup = vec![site(1, &[1, 0], None, S, 1), site(1, &[0, 1], None, S, 1)];
        assert!(InfectionConfig::new(trefoil_base(), dup, 3, None).is_err());
        let bad = vec![site(1, &[1, 0, 0], None, S, 1)];
        assert!(matches!(
            InfectionConfig::new(trefoil_base(), bad, 3, None),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
