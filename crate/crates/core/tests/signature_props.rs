mod common;

use std::collections::{BTreeMap, BTreeSet};

use ddcat_core::{emit_signature, load_signature, CellBoundary, DoubleSignature, Kind, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_word, signatures};

/// Objects, generators with random endpoints, and cells assembled from
/// random words whose corners happen to agree.
fn random_signature(seed: u64) -> DoubleSignature {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let objects: BTreeSet<String> = (0..rng.gen_range(1..4)).map(|i| format!("O{i}")).collect();
    let obj: Vec<String> = objects.iter().cloned().collect();
    let gens = |prefix: &str, rng: &mut ChaCha8Rng| -> BTreeMap<String, (String, String)> {
        (0..rng.gen_range(1..4))
            .map(|i| {
                let d = obj[rng.gen_range(0..obj.len())].clone();
                let c = obj[rng.gen_range(0..obj.len())].clone();
                (format!("{prefix}{i}"), (d, c))
            })
            .collect()
    };
    let hgens = gens("h", &mut rng);
    let vgens = gens("v", &mut rng);
    let mut sig = DoubleSignature {
        objects,
        hgens,
        vgens,
        cells: BTreeMap::new(),
    };
    let mut tries = 0;
    while sig.cells.len() < 4 && tries < 400 {
        tries += 1;
        let b = CellBoundary {
            domh: random_word(&sig, Kind::H, 2, rng.gen()),
            codh: random_word(&sig, Kind::H, 2, rng.gen()),
            domv: random_word(&sig, Kind::V, 2, rng.gen()),
            codv: random_word(&sig, Kind::V, 2, rng.gen()),
        };
        let name = format!("c{}", sig.cells.len());
        if sig.check_boundary(&name, &b).is_ok() {
            sig.cells.insert(name, b);
        }
    }
    sig
}

proptest! {
    #![proptest_config(common::config(256))]

    #[test]
    fn factors_concatenate_back(si in 0usize..10, kind in prop_oneof![Just(Kind::H), Just(Kind::V)], seed in any::<u64>()) {
        let (_, sig) = &signatures()[si];
        let w = random_word(sig, kind, 6, seed);
        for i in 0..=w.len() {
            let a = sig.factor_at(kind, &w, 0, i).unwrap();
            let b = sig.factor_at(kind, &w, i, w.len() - i).unwrap();
            prop_assert_eq!(&a.at, &w.at);
            prop_assert_eq!(&b.at, &sig.object_at(kind, &w, i).unwrap());
            let mut gens = a.gens.clone();
            gens.extend(b.gens.iter().cloned());
            prop_assert_eq!(Word { at: w.at.clone(), gens }, w.clone());
            prop_assert!(sig.check_word(kind, &b).is_ok());
        }
    }

    #[test]
    fn emitted_signature_loads_back(seed in any::<u64>()) {
        let sig = random_signature(seed);
        prop_assume!(sig.validate().is_ok());
        let back = load_signature(&emit_signature(&sig)).unwrap();
        prop_assert_eq!(back, sig);
    }
}

#[test]
fn bundled_signatures_round_trip() {
    for (name, sig) in signatures() {
        assert_eq!(
            load_signature(&emit_signature(&sig)).unwrap(),
            sig,
            "{name}"
        );
    }
}
