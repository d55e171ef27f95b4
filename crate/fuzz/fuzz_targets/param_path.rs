#![no_main]

use libfuzzer_sys::fuzz_target;
use polariton_ring::models::ParamPath;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(path) = text.parse::<ParamPath>() {
        assert_eq!(path.to_string().parse::<ParamPath>().unwrap(), path);
    }
});
