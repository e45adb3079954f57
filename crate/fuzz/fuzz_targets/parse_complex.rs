#![no_main]

use libfuzzer_sys::fuzz_target;
use schwarzfn::{format_complex, parse_complex};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(z) = parse_complex(text) {
        if z.is_finite() {
            let back = parse_complex(&format_complex(z)).expect("formatted values parse");
            assert_eq!(back, z);
        }
    }
});
