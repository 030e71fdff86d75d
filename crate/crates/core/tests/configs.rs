use std::path::PathBuf;

use cgcert_core::dataset::load_paper_dataset;
use cgcert_core::gilmer::{certify_genus_lower_bound, check_certificate, Caps};
use cgcert_core::infection::{CopyRescale, InfectionConfig};
use num_bigint::BigInt;

fn config(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "configs", name]
        .iter()
        .collect()
}

fn same_sites(a: &InfectionConfig, b: &InfectionConfig) {
    assert_eq!(a.base, b.base);
    assert_eq!(a.modulus, b.modulus);
    assert_eq!(a.copy_rescale, b.copy_rescale);
    assert_eq!(a.sites.len(), b.sites.len());
    for (x, y) in a.sites.iter().zip(&b.sites) {
        assert_eq!(
            (x.label, &x.z, &x.z_prime, &x.copies_per_c),
            (y.label, &y.z, &y.z_prime, &y.copies_per_c)
        );
        assert_eq!(x.companion.to_string(), y.companion.to_string());
    }
}

#[test]
fn shipped_configs_match_the_dataset() {
    let ds = load_paper_dataset().unwrap();
    same_sites(
        &InfectionConfig::load(&config("paper.json")).unwrap(),
        &ds.infection_config(None).unwrap(),
    );
    let rescale = CopyRescale {
        factor: BigInt::from(12),
        log2_step: 25,
    };
    same_sites(
        &InfectionConfig::load(&config("paper_sum.json")).unwrap(),
        &ds.infection_config(Some(rescale)).unwrap(),
    );
}

#[test]
fn matrix_base_matches_bundled_base() {
    let text = std::fs::read_to_string(config("paper.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["base"] = serde_json::json!({"file": "paper_seifert.json"});
    let cfg = InfectionConfig::from_json(&v, &config("")).unwrap();
    assert_eq!(cfg.base, load_paper_dataset().unwrap().cover);
}

#[test]
fn certificates_recheck_cleanly() {
    for (name, copies, g) in [
        ("paper.json", 1, 1),
        ("paper.json", 1, 0),
        ("paper_sum.json", 2, 2),
    ] {
        let cfg = InfectionConfig::load(&config(name)).unwrap();
        let cert = certify_genus_lower_bound(&cfg, copies, g, Caps::default()).unwrap();
        assert_eq!(
            check_certificate(&cfg, &cert).unwrap(),
            Vec::<String>::new(),
            "{name} {copies} {g}"
        );
        let round: cgcert_core::gilmer::GenusCertificate =
            serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
        assert_eq!(round, cert);
    }
}

#[test]
fn genus_zero_is_certified() {
    // sliceness is obstructed: 81 characters must vanish, the small set has 9
    let cfg = InfectionConfig::load(&config("paper.json")).unwrap();
    let cert = certify_genus_lower_bound(&cfg, 1, 0, Caps::default()).unwrap();
    assert_eq!(cert.annihilator_bound, 81u32.into());
    assert_eq!(
        cert.conclusion.as_deref(),
        Some("g4 >= 1 for all c >= max(c0, 2)")
    );
}
