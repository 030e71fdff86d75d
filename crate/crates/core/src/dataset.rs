//! The bundled base knot: its Seifert matrix, the lifted infection curves and
//! the reduction tables used to read characters off four generators.
//!
//! The file is validated on every load; a failed check names the invariant.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::Deserialize;

use crate::cover::{Character, CoverPresentation, HomologyClass};
use crate::error::{Error, Result};
use crate::infection::{CopyRescale, InfectionConfig, InfectionSite};
use crate::knot::{parse_knot_expr, KnotExpr, SeifertKnot};
use crate::linalg::{IntMatrix, DEFAULT_ENUMERATION_CAP};

const PAPER_DATASET: &str = include_str!("../data/paper_dataset.json");

#[derive(Clone, Debug)]
pub struct PaperDataset {
    pub seifert: SeifertKnot,
    pub cover: CoverPresentation,
    pub modulus: u64,
    /// Indices of the generators `y_i` that the reduced forms are written in.
    pub generators: Vec<usize>,
    /// Lifted curve classes keyed `z0`, `z1`, `z1'`, … in `y`-coordinates.
    pub z_raw: BTreeMap<String, HomologyClass>,
    /// The same classes as coefficients on `generators`.
    pub z_reduced: BTreeMap<String, Vec<i64>>,
    /// `χ(y_i)` as a combination of the values on `generators`.
    pub y_reduction: BTreeMap<usize, Vec<i64>>,
    /// Per site, linear forms on `generators`; the site condition holds iff
    /// one of them vanishes mod `modulus`.
    pub condition_rewrites: BTreeMap<u32, Vec<Vec<i64>>>,
    pub default_companion: KnotExpr,
    /// Site `i` carries `2^{log2_copies_step · i}` copies of the companion.
    pub log2_copies_step: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    seifert_matrix: IntMatrix,
    invariant_factors: Vec<i64>,
    modulus: u64,
    generators: Vec<usize>,
    z_raw: BTreeMap<String, HomologyClass>,
    z_reduced: BTreeMap<String, Vec<i64>>,
    y_reduction: BTreeMap<usize, Vec<i64>>,
    condition_rewrites: BTreeMap<u32, Vec<Vec<i64>>>,
    default_profile: RawProfile,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    companion: String,
    log2_copies_step: u32,
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

/// The bundled dataset, validated once per process.
pub fn load_paper_dataset() -> Result<PaperDataset> {
    static CACHE: OnceLock<std::result::Result<PaperDataset, String>> = OnceLock::new();
    CACHE
        .get_or_init(|| parse_dataset(PAPER_DATASET).map_err(|e| e.to_string()))
        .clone()
        .map_err(Error::Validation)
}

pub fn paper_cover() -> Result<CoverPresentation> {
    Ok(load_paper_dataset()?.cover)
}

/// Parses and validates a dataset document.
pub fn parse_dataset(text: &str) -> Result<PaperDataset> {
    let raw: RawDataset = serde_json::from_str(text)?;
    let a = raw.seifert_matrix;
    a.ensure_square()?;
    let n = a.rows();
    let d = a.sub(&a.transpose()).det()?;
    let seifert = SeifertKnot::new(a).map_err(|_| fail(format!("|det(A - A^T)| = {}, expected 1", d)))?;
    let cover = CoverPresentation::from_seifert(&seifert)?;
    let expected: Vec<BigInt> = raw.invariant_factors.iter().map(|&x| BigInt::from(x)).collect();
    if cover.invariant_factors() != expected.as_slice() {
        return Err(fail(format!(
            "invariant factors of A + A^T are {:?}, expected {:?}",
            cover
                .invariant_factors()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
            raw.invariant_factors
        )));
    }
    let ds = PaperDataset {
        default_companion: parse_knot_expr(&raw.default_profile.companion)?,
        log2_copies_step: raw.default_profile.log2_copies_step,
        seifert,
        cover,
        modulus: raw.modulus,
        generators: raw.generators,
        z_raw: raw.z_raw,
        z_reduced: raw.z_reduced,
        y_reduction: raw.y_reduction,
        condition_rewrites: raw.condition_rewrites,
    };
    ds.check_shapes(n)?;
    ds.check_characters()?;
    Ok(ds)
}

fn dot_mod(form: &[i64], vals: &[u64], q: u64) -> u64 {
    let s: i128 = form.iter().zip(vals).map(|(&a, &v)| a as i128 * v as i128).sum();
    s.rem_euclid(q as i128) as u64
}

impl PaperDataset {
    fn check_shapes(&self, n: usize) -> Result<()> {
        let k = self.generators.len();
        if self.generators.iter().any(|&g| g >= n) {
            return Err(fail("generator index out of range"));
        }
        for (label, z) in &self.z_raw {
            if z.len() != n {
                return Err(fail(format!("{label} has length {}, expected {n}", z.len())));
            }
            if !self.z_reduced.contains_key(label) {
                return Err(fail(format!("{label} has no reduced form")));
            }
        }
        let forms = self
            .z_reduced
            .values()
            .chain(self.y_reduction.values())
            .chain(self.condition_rewrites.values().flatten());
        if forms.into_iter().any(|f| f.len() != k) {
            return Err(fail(format!("every reduced form must have {k} coefficients")));
        }
        if self.y_reduction.keys().any(|&i| i >= n) {
            return Err(fail("y_reduction index out of range"));
        }
        for &label in self.condition_rewrites.keys() {
            let z = format!("z{label}");
            if !self.z_raw.contains_key(&z) {
                return Err(fail(format!("condition {label} has no class {z}")));
            }
        }
        Ok(())
    }

    /// Raw vs. reduced classes, the y-reduction table and the condition
    /// rewrites, checked on every character.
    fn check_characters(&self) -> Result<()> {
        let q = self.modulus;
        let cfg = self.conditions_config()?;
        for chi in self.cover.enumerate_characters(q, DEFAULT_ENUMERATION_CAP)? {
            let v = chi.values();
            let gens: Vec<u64> = self.generators.iter().map(|&g| v[g]).collect();
            for (label, z) in &self.z_raw {
                if chi.evaluate(z)? != dot_mod(&self.z_reduced[label], &gens, q) {
                    return Err(fail(format!(
                        "raw and reduced {label} disagree on character {:?}",
                        v
                    )));
                }
            }
            for (&i, form) in &self.y_reduction {
                if v[i] != dot_mod(form, &gens, q) {
                    return Err(fail(format!("y_{i} reduction fails on character {v:?}")));
                }
            }
            let conds = cfg.conditions(&chi)?;
            for (site, holds) in cfg.sites.iter().zip(conds) {
                let rewritten = self.condition_rewrites[&site.label]
                    .iter()
                    .any(|f| dot_mod(f, &gens, q) == 0);
                if rewritten != holds {
                    return Err(fail(format!(
                        "rewritten condition {} disagrees on character {v:?}",
                        site.label
                    )));
                }
            }
        }
        Ok(())
    }

    fn site_classes(&self, label: u32) -> Result<(HomologyClass, Option<HomologyClass>)> {
        let z = self
            .z_raw
            .get(&format!("z{label}"))
            .ok_or_else(|| fail(format!("missing class z{label}")))?;
        Ok((z.clone(), self.z_raw.get(&format!("z{label}'")).cloned()))
    }

    fn conditions_config(&self) -> Result<InfectionConfig> {
        let sites = self
            .condition_rewrites
            .keys()
            .map(|&label| {
                let (z, z_prime) = self.site_classes(label)?;
                Ok(InfectionSite {
                    label,
                    z,
                    z_prime,
                    companion: KnotExpr::unknot(),
                    copies_per_c: BigInt::from(0),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        InfectionConfig::new(self.cover.clone(), sites, self.modulus, None)
    }

    /// The default infection: site `i` carries `2^{5i}·c` copies of the
    /// companion.
    pub fn infection_config(&self, copy_rescale: Option<CopyRescale>) -> Result<InfectionConfig> {
        let mut cfg = self.conditions_config()?;
        for s in &mut cfg.sites {
            s.companion = self.default_companion.clone();
            s.copies_per_c = BigInt::from(1) << (self.log2_copies_step as usize * s.label as usize);
        }
        cfg.copy_rescale = copy_rescale;
        Ok(cfg)
    }

    /// Values of `χ` on `generators`.
    pub fn reduced_values(&self, chi: &Character) -> Vec<u64> {
        self.generators.iter().map(|&g| chi.values()[g]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_dataset_loads() {
        let ds = load_paper_dataset().unwrap();
        assert_eq!(ds.seifert.size(), 16);
        assert_eq!(ds.cover.order(), &BigInt::from(6561));
        assert_eq!(ds.z_raw["z0"], HomologyClass::unit(16, 9));
        assert_eq!(ds.generators, vec![9, 11, 13, 15]);
    }

    fn tampered(from: &str, to: &str) -> Result<PaperDataset> {
        assert!(PAPER_DATASET.contains(from));
        parse_dataset(&PAPER_DATASET.replacen(from, to, 1))
    }

    #[test]
    fn transcription_errors_are_caught() {
        // the entry as printed breaks the invariant factors
        let err = tampered("[-1, 0, 0, 1, 0", "[-2, 0, 0, 1, 0").unwrap_err();
        assert!(err.to_string().contains("invariant factors"), "{err}");
        let err = tampered("\"z3\": [0, 4, 0, 0]", "\"z3\": [0, 4, 0, 1]").unwrap_err();
        assert!(err.to_string().contains("z3"), "{err}");
        let err = tampered("\"7\": [0, 0, 0, 3]", "\"7\": [0, 0, 0, 4]").unwrap_err();
        assert!(err.to_string().contains("y_7"), "{err}");
        let err = tampered("[0, -7, -8, 1]", "[0, -7, -7, 1]").unwrap_err();
        assert!(err.to_string().contains("condition 1"), "{err}");
    }

    #[test]
    fn default_config() {
        let ds = load_paper_dataset().unwrap();
        let cfg = ds.infection_config(None).unwrap();
        assert_eq!(cfg.sites.len(), 5);
        assert!(!cfg.sites[0].is_paired());
        assert!(cfg.sites[1..].iter().all(|s| s.is_paired()));
        assert_eq!(cfg.sites[4].copies_per_c, BigInt::from(1u64 << 20));
    }
}
