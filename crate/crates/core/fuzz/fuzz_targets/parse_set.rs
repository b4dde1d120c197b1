#![no_main]

use anlattice::{read_set, write_set};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(set) = read_set(text) {
        let written = write_set(&set);
        let again = read_set(&written).expect("writer output parses");
        assert_eq!(again, set);
        assert_eq!(write_set(&again), written);
    }
});
