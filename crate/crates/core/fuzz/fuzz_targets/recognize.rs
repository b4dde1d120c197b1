#![no_main]

use anlattice::hypotheses::check_all;
use anlattice::{normalize, read_set};
use libfuzzer_sys::fuzz_target;

// Parsed sets go through the hypothesis check and the normalizer; a
// successful normalization must agree with the check, and no input may
// trigger the internal-consistency error.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(set) = read_set(text) else { return };
    if set.dim() > 5 || set.len() > 64 {
        return;
    }
    let report = check_all(&set, set.dim(), 20_000);
    match normalize(&set, None) {
        Ok(res) => {
            assert_eq!(res.normalized.len(), set.len());
            if let Ok(r) = report {
                assert!(r.all_pass());
            }
        }
        Err(e) => assert!(!e.is_internal(), "{e:?}"),
    }
});
