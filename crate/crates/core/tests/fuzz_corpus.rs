//! Replays the checked-in fuzz seeds through the parsers; every seed is a
//! valid input.

use std::path::PathBuf;

use polariton_ring::config::RunConfig;
use polariton_ring::models::{ModelSpec, ParamPath};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.display().to_string(), std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn model_spec_seeds_build() {
    for (name, text) in seeds("model_spec") {
        let spec = ModelSpec::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        spec.build().unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn run_config_seeds_resolve() {
    for (name, text) in seeds("run_config") {
        let cfg = RunConfig::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        cfg.job(None).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn param_path_seeds_round_trip() {
    for (name, text) in seeds("param_path") {
        let p: ParamPath = text.parse().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(p.to_string(), text);
    }
}
