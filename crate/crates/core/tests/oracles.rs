//! Independent oracles for the sieve and the torus-knot signatures.

use std::collections::BTreeSet;

use cgcert_core::dataset::load_paper_dataset;

/// Character values on `(y9, y11, y13, y15)` determine the character; the
/// conditions are evaluated from the reduced forms with plain integer
/// arithmetic, independently of the library's sieve.
fn oracle_small_set(q: i64) -> Vec<[i64; 4]> {
    let ds = load_paper_dataset().unwrap();
    let red = |label: &str, v: &[i64; 4]| -> i64 {
        ds.z_reduced[label]
            .iter()
            .zip(v)
            .map(|(a, b)| a * b)
            .sum::<i64>()
            .rem_euclid(q)
    };
    let mut out = Vec::new();
    for idx in 0..q.pow(4) {
        let v = [idx % q, idx / q % q, idx / (q * q) % q, idx / (q * q * q)];
        let mut ok = red("z0", &v) == 0;
        for i in 1..=4 {
            let (a, b) = (red(&format!("z{i}"), &v), red(&format!("z{i}'"), &v));
            ok &= a == b || (a + b) % q == 0;
        }
        if ok {
            out.push(v);
        }
    }
    out
}

#[test]
fn sieve_oracle_mod_3() {
    let small = oracle_small_set(3);
    let nontrivial: BTreeSet<_> = small.into_iter().filter(|v| *v != [0; 4]).collect();
    assert_eq!(nontrivial, BTreeSet::from([[0, 1, 0, 0], [0, 2, 0, 0]]));
}

#[test]
fn sieve_oracle_mod_9() {
    use cgcert_core::infection::InfectionConfig;
    let small = oracle_small_set(9);
    let cyclic: Vec<[i64; 4]> = (0..9).map(|k| [0, k, 0, 0]).collect();
    assert_eq!(small, cyclic);

    let ds = load_paper_dataset().unwrap();
    let cfg = ds.infection_config(None).unwrap();
    let cfg = InfectionConfig::new(cfg.base, cfg.sites, 9, None).unwrap();
    let lib: Vec<Vec<u64>> = cfg
        .small_character_set(1 << 20)
        .unwrap()
        .iter()
        .map(|c| ds.reduced_values(c))
        .collect();
    let mut oracle: Vec<Vec<u64>> = small
        .iter()
        .map(|v| v.iter().map(|&x| x as u64).collect())
        .collect();
    oracle.sort();
    let mut lib_sorted = lib.clone();
    lib_sorted.sort();
    assert_eq!(lib_sorted, oracle);
}

/// The surjective character `y11 -> 1`, checked by hand from the reduced
/// classes: z1 = z1' = 1, z2 = 8 = -z2', z3 = z3' = 4, z4 = 4 = -z4'.
#[test]
fn surjective_counterexample() {
    let ds = load_paper_dataset().unwrap();
    let ev = |label: &str| ds.z_reduced[label][1].rem_euclid(9);
    assert_eq!(ds.z_reduced["z0"][1], 0);
    assert_eq!((ev("z1"), ev("z1'")), (1, 1));
    assert_eq!((ev("z2"), ev("z2'")), (8, 1));
    assert_eq!((ev("z3"), ev("z3'")), (4, 4));
    assert_eq!((ev("z4"), ev("z4'")), (4, 5));
}

/// For `0 < s ≤ 1/2`, `σ_{T(2,n)}(e^{2πis}) = −2·#{k odd : k/(2n) < s}`:
/// the roots of `(t^n + 1)/(t + 1)` sit at angles `k/(2n)`, `k` odd, `k ≠ n`.
fn torus_signature_oracle(n: i64, num: i64, den: i64) -> i64 {
    assert!(2 * num <= den);
    -2 * (1..n).step_by(2).filter(|k| k * den < 2 * n * num).count() as i64
}

#[test]
fn torus_jump_oracle() {
    use cgcert_core::knot::{tl_signature, RationalAngle, SeifertKnot};
    for n in [3i64, 5, 7, 9, 11] {
        for (num, den) in [(1, 9), (2, 9), (4, 9), (1, 6), (1, 2)] {
            if (2 * n * num) % den == 0 && (2 * n * num / den) % 2 == 1 {
                continue; // root of the Alexander polynomial
            }
            let s = RationalAngle::new(num as u64, den as u64).unwrap();
            let got = tl_signature(&SeifertKnot::torus_2n(n as u64), s).unwrap();
            assert_eq!(
                got,
                torus_signature_oracle(n, num, den),
                "T(2,{n}) at {num}/{den}"
            );
        }
    }
}
