#![no_main]

use libfuzzer_sys::fuzz_target;
use schwarzfn::{BarycentricRational, Complex64};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = BarycentricRational::from_json(text) {
        let back = BarycentricRational::from_json(&r.to_json()).expect("serialized rationals parse");
        assert_eq!(back.to_json(), r.to_json());
        let _ = r.eval(Complex64::new(0.25, -0.5));
        if r.len() <= 16 {
            let _ = r.poles();
            let _ = r.zeros();
        }
    }
});
