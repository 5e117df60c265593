//! Stable-toolchain stand-in for the fuzz targets: every decoder must
//! return an error rather than panic on mutated seeds and arbitrary text.

use std::fs;
use std::path::PathBuf;

use gpt_sim::io;
use gpt_sim::numerics::{Rational, Tolerance};
use proptest::prelude::*;

const TARGETS: [&str; 7] = [
    "state_space",
    "observable",
    "qubit_observable",
    "postprocessing",
    "certificate",
    "decomposition",
    "noise",
];

fn seeds() -> Vec<(usize, Vec<u8>)> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let mut out = Vec::new();
    for (t, name) in TARGETS.iter().enumerate() {
        let mut files: Vec<PathBuf> = fs::read_dir(root.join(name))
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        files.sort();
        out.extend(files.into_iter().map(|p| (t, fs::read(p).unwrap())));
    }
    out
}

/// Runs decoder `target` in both arithmetic modes; true if either accepts.
fn decode(target: usize, data: &[u8]) -> bool {
    let tol = Tolerance::default();
    let Ok(text) = std::str::from_utf8(data) else { return false };
    let Ok(v) = io::parse_json(text) else { return false };
    match target {
        0 => io::state_space_from_json::<Rational>(&v).is_ok() | io::state_space_from_json::<f64>(&v).is_ok(),
        1 => {
            io::observable_from_json::<Rational>(&v).is_ok()
                | io::observable_from_json::<f64>(&v).is_ok()
                | io::observables_from_json::<f64>(&v).is_ok()
        }
        2 => {
            io::qubit_observable_from_json::<Rational>(&v, &tol).is_ok()
                | io::qubit_observable_from_json::<f64>(&v, &tol).is_ok()
        }
        3 => {
            io::postprocessing_from_json::<Rational>(&v, &tol).is_ok()
                | io::postprocessing_from_json::<f64>(&v, &tol).is_ok()
        }
        4 => io::certificate_from_json::<Rational>(&v).is_ok() | io::certificate_from_json::<f64>(&v).is_ok(),
        5 => io::decomposition_from_json::<Rational>(&v).is_ok() | io::decomposition_from_json::<f64>(&v).is_ok(),
        _ => io::noise_from_json::<Rational>(&v).is_ok() | io::noise_from_json::<f64>(&v).is_ok(),
    }
}

#[test]
fn seeds_decode() {
    // Seeds that are valid JSON must decode; the truncated ones must not.
    for (t, data) in seeds() {
        let parses = io::parse_json(std::str::from_utf8(&data).unwrap()).is_ok();
        assert_eq!(decode(t, &data), parses, "{}", TARGETS[t]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn mutated_seeds_never_panic(pick in any::<prop::sample::Index>(), edits in prop::collection::vec((any::<prop::sample::Index>(), any::<u8>()), 1..6), cut in any::<prop::sample::Index>()) {
        let all = seeds();
        let (t, mut data) = all[pick.index(all.len())].clone();
        for (i, b) in edits {
            let k = i.index(data.len());
            data[k] = b;
        }
        data.truncate(cut.index(data.len()) + 1);
        decode(t, &data);
    }

    #[test]
    fn arbitrary_json_never_panics(t in 0usize..7, text in r#"[\[\]{}",:0-9a-z/. -]{0,80}"#) {
        decode(t, text.as_bytes());
    }
}
