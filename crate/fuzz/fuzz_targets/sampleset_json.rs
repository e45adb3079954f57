#![no_main]

use libfuzzer_sys::fuzz_target;
use schwarzfn::SampleSet;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = SampleSet::from_json(text) {
        assert_eq!(s.z.len(), s.f.len());
        let back = SampleSet::from_json(&s.to_json()).expect("serialized sample sets parse");
        assert_eq!(back.to_json(), s.to_json());
    }
});
