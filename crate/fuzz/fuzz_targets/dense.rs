#![no_main]

use genaut::io::{parse_dense, write_dense};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = parse_dense(text) {
        let again = parse_dense(&write_dense(&m)).expect("written matrix re-parses");
        assert_eq!(again, m);
    }
});
