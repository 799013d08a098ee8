#![no_main]

use genaut::io::{parse_alist, write_alist};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(h) = parse_alist(text) {
        let again = parse_alist(&write_alist(&h)).expect("written matrix re-parses");
        assert_eq!(again, h);
    }
});
