//! Experiments: phase sweeps, concurrence optimization,
//! thermalization maps and effective-model validation.

mod optimize;
mod sweep;
mod thermal;
mod validate;

use std::f64::consts::TAU;

pub use optimize::{
    apply_params, concurrence_at, optimize_concurrence, FreeParam, OptimizeReport,
    OptimizeSettings, TracePoint, DEFAULT_BUDGET,
};
pub use sweep::{
    format_value, linspace, run_sweep, solve_point, Axis, Grid, Observable, SweepPlan, SweepResult,
};
pub use thermal::{
    abs_derivative, count_interior_peaks, distance_at, richardson_check, smooth3, thermal_map,
    MAX_VALID_TEMPERATURE, THERMAL_HEADER,
};
pub use validate::{check_regime, effective_spec, validate_effective};

use crate::models::ModelSpec;

/// Default grid resolution per phase axis.
pub const PHASE_POINTS: usize = 41;

/// φ₁ × φ₃ sweep over [0, 2π]² of the concurrence between polaritons
/// `sites` and the ground population of polariton 0. The drives with phases
/// φ₁, φ₃ are `x[0]` and `x[2]` for both entangling models.
pub fn phase_plan(model: ModelSpec, sites: [usize; 2], points: usize) -> SweepPlan {
    SweepPlan {
        model,
        axes: vec![
            Axis { path: "x[0].arg".parse().unwrap(), grid: Grid::linspace(0.0, TAU, points) },
            Axis { path: "x[2].arg".parse().unwrap(), grid: Grid::linspace(0.0, TAU, points) },
        ],
        observables: vec![
            Observable::Concurrence { sites },
            Observable::Population { site: 0, level: 0 },
        ],
    }
}

/// Distance of φ to the nearest odd multiple of π.
pub fn distance_to_odd_pi(phi: f64) -> f64 {
    let r = (phi - std::f64::consts::PI).rem_euclid(TAU);
    r.min(TAU - r)
}

/// Full width at half maximum of a sampled single peak, by linear
/// interpolation between samples; a side that never drops below half
/// maximum extends to the grid edge.
pub fn fwhm(x: &[f64], v: &[f64]) -> f64 {
    let peak = (0..v.len()).fold(0, |b, i| if v[i] > v[b] { i } else { b });
    let half = v[peak] / 2.0;
    let cross = |i: usize, j: usize| x[i] + (half - v[i]) * (x[j] - x[i]) / (v[j] - v[i]);
    let left = (1..=peak)
        .rev()
        .find(|&i| v[i - 1] < half)
        .map_or(x[0], |i| cross(i - 1, i));
    let right = (peak..v.len() - 1)
        .find(|&i| v[i + 1] < half)
        .map_or(x[v.len() - 1], |i| cross(i, i + 1));
    right - left
}
