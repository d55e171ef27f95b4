//! Physical models: microscopic cavity arrays and their effective
//! polariton-only master equations.

mod build;
mod params;
pub mod presets;
mod spec;

pub use build::{
    build_full_micro, build_pair_effective, build_pair_thermal, build_ring3_effective, Model,
    MAX_MICRO_DIM,
};
pub use params::{derive_effective, EffectiveParams, Geometry, MicroParams};
pub use spec::{Component, ModelSpec, ParamPath};
