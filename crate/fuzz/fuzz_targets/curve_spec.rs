#![no_main]

use libfuzzer_sys::fuzz_target;
use schwarzfn::Curve;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(curve) = text.parse::<Curve>() {
        let again: Curve = curve.id().parse().expect("curve ids parse");
        assert_eq!(again.id(), curve.id());
        let _ = curve.bounding_box();
    }
});
