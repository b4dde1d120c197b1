//! Replays the checked-in fuzz seeds through the same properties the fuzz
//! targets assert, so the corpus is exercised on stable toolchains too.

use std::fs;
use std::path::PathBuf;

use anlattice::generate::ScrambleRecipe;
use anlattice::hypotheses::check_all;
use anlattice::{normalize, read_set, write_set};

fn seeds(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            let bytes = fs::read(&p).unwrap();
            (p, bytes)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn parse_set_seeds_round_trip() {
    let mut parsed = 0;
    for (path, bytes) in seeds("parse_set") {
        let text = String::from_utf8(bytes).unwrap();
        if let Ok(set) = read_set(&text) {
            let written = write_set(&set);
            assert_eq!(read_set(&written).unwrap(), set, "{}", path.display());
            parsed += 1;
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn parse_recipe_seeds_round_trip() {
    for (path, bytes) in seeds("parse_recipe") {
        let text = String::from_utf8(bytes).unwrap();
        if let Ok(r) = text.parse::<ScrambleRecipe>() {
            assert_eq!(r.to_string(), text, "{}", path.display());
        }
    }
}

#[test]
fn recognize_seeds_are_consistent() {
    let mut accepted = 0;
    for (path, bytes) in seeds("recognize") {
        let set = read_set(std::str::from_utf8(&bytes).unwrap()).unwrap();
        let report = check_all(&set, set.dim(), 20_000).unwrap();
        match normalize(&set, None) {
            Ok(_) => {
                assert!(report.all_pass(), "{}", path.display());
                accepted += 1;
            }
            Err(e) => assert!(!e.is_internal(), "{}: {e:?}", path.display()),
        }
    }
    assert_eq!(accepted, 3);
}
