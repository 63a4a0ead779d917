#![no_main]

use libfuzzer_sys::fuzz_target;
use steiner_spanner::format::{parse_forest, write_forest};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(forest) = parse_forest(s) {
            let _ = write_forest(&forest);
        }
    }
});
