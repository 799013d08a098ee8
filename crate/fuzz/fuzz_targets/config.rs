#![no_main]

use genaut::sim::SweepConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Anything accepted must be a runnable sweep description.
    if let Ok(cfg) = SweepConfig::parse(text) {
        cfg.params().validate().expect("parse validates the sweep");
        cfg.decoder_spec().expect("parse validates the decoder");
    }
});
