#![no_main]

use libfuzzer_sys::fuzz_target;
use steiner_spanner::format::{parse_spanner, write_spanner};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(g) = parse_spanner(s) {
            let _ = write_spanner(&g, true);
        }
    }
});
