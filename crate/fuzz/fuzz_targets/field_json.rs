#![no_main]

use libfuzzer_sys::fuzz_target;
use schwarzfn::field::FieldGrid;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = FieldGrid::from_json(text) {
        let back = FieldGrid::from_json(&g.to_json()).expect("serialized fields parse");
        assert_eq!(back.to_json(), g.to_json());
        let _ = g.label_at(0, 0);
    }
});
