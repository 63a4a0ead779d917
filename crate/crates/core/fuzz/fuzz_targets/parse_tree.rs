#![no_main]

use libfuzzer_sys::fuzz_target;
use steiner_spanner::format::{parse_tree, write_tree};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(tree) = parse_tree(s) {
            let _ = write_tree(&tree);
        }
    }
});
