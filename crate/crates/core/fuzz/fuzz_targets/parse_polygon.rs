#![no_main]

use libfuzzer_sys::fuzz_target;
use steiner_spanner::format::{parse_polygon, write_polygon};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        // round trip whatever parses
        if let Ok((polygon, sites)) = parse_polygon(s) {
            let again = parse_polygon(&write_polygon(&polygon, &sites)).unwrap();
            assert_eq!(again.1, sites);
        }
    }
});
