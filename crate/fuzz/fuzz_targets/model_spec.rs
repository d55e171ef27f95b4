#![no_main]

use libfuzzer_sys::fuzz_target;
use polariton_ring::models::ModelSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = ModelSpec::from_json(text) else { return };
    // whatever parses must serialize back to something that parses
    let again = serde_json::to_string(&spec).unwrap();
    assert!(ModelSpec::from_json(&again).is_ok(), "{again}");
    let _ = spec.build();
});
