#![no_main]

use libfuzzer_sys::fuzz_target;
use schwarzfn::{involution_error, reflect, Complex64, SchwarzApprox};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = SchwarzApprox::from_json(text) {
        let back = SchwarzApprox::from_json(&s.to_json()).expect("serialized models parse");
        assert_eq!(back.to_json(), s.to_json());
        let z = Complex64::new(0.3, 1.7);
        let _ = reflect(&s, z);
        let _ = involution_error(&s, z);
    }
});
