#![allow(dead_code)]

use ddcat_core::fixtures;
use ddcat_core::{DoubleSignature, Kind, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn signatures() -> Vec<(&'static str, DoubleSignature)> {
    vec![
        ("s0", fixtures::s0()),
        ("s0x", fixtures::s0x()),
        ("three_objects", fixtures::three_objects()),
        ("mixed", fixtures::mixed()),
        ("pinwheel", fixtures::pinwheel_signature()),
        ("inductive", fixtures::inductive_signature()),
        ("chain", fixtures::chain_signature()),
        ("column", fixtures::column_signature()),
        ("gluing", fixtures::gluing_signature()),
        ("subdivision", fixtures::subdivision_signature()),
    ]
}

/// A random composable word of at most `len` generators.
pub fn random_word(sig: &DoubleSignature, kind: Kind, len: usize, seed: u64) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let objects: Vec<&String> = sig.objects.iter().collect();
    let start = objects[rng.gen_range(0..objects.len())].clone();
    let mut at = start.clone();
    let mut gens = Vec::new();
    for _ in 0..len {
        let next: Vec<(&String, &String)> = sig
            .gens(kind)
            .iter()
            .filter(|(_, (d, _))| *d == at)
            .map(|(g, (_, c))| (g, c))
            .collect();
        if next.is_empty() {
            break;
        }
        let (g, c) = next[rng.gen_range(0..next.len())];
        gens.push(g.clone());
        at = c.clone();
    }
    Word { at: start, gens }
}

pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        failure_persistence: Some(Box::new(
            proptest::test_runner::FileFailurePersistence::WithSource("regressions"),
        )),
        ..Default::default()
    }
}
