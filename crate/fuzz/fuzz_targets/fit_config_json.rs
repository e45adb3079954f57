#![no_main]

use libfuzzer_sys::fuzz_target;
use schwarzfn::FitConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = FitConfig::from_json(text) {
        cfg.validate().expect("parsed configs are valid");
    }
});
