use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::presets::thermal_pair;
use crate::observables::{gibbs_two_qubit, thermal_occupation, trace_distance, ThermalSpec};

use super::sweep::{solve_point, SweepResult};

/// Reservoir temperatures above this (in units of the polariton
/// frequency) are outside the low-temperature regime and get flagged.
pub const MAX_VALID_TEMPERATURE: f64 = 0.1;

pub const THERMAL_HEADER: [&str; 5] = ["T", "x", "distance", "abs_d_distance_dx", "t_out_of_range"];

/// Trace distance between the single-guide pair steady state and the
/// two-site Gibbs state at reservoir temperature `t` (ω = 1).
pub fn distance_at(x: f64, t: f64, y: f64, z: f64) -> Result<f64> {
    distance_and_residual(x, t, y, z).map(|(d, _)| d)
}

fn distance_and_residual(x: f64, t: f64, y: f64, z: f64) -> Result<(f64, f64)> {
    let n_p = thermal_occupation(1.0, t);
    let (_, rep) = solve_point(&thermal_pair(x, y, z, n_p))?;
    let gibbs = gibbs_two_qubit(ThermalSpec { omega: 1.0, temperature: t })?;
    Ok((trace_distance(&rep.rho, &gibbs)?, rep.residual))
}

/// |∂d/∂x| on a grid: central differences inside, one-sided at the ends.
pub fn abs_derivative(x: &[f64], d: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|i| {
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n - 1));
            ((d[hi] - d[lo]) / (x[hi] - x[lo])).abs()
        })
        .collect()
}

/// Distance map over T (outer) × x (inner) with its x-derivative.
///
/// Columns follow `THERMAL_HEADER`; `t_out_of_range` is 1 for
/// T > `MAX_VALID_TEMPERATURE`.
pub fn thermal_map(x_grid: &[f64], t_grid: &[f64], y: f64, z: f64) -> Result<SweepResult> {
    for (name, g) in [("x", x_grid), ("T", t_grid)] {
        if g.is_empty() || g.iter().any(|v| !v.is_finite()) || g.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(format!("{name} grid must be nonempty and strictly increasing")));
        }
    }
    if x_grid[0] < 0.0 || t_grid[0] < 0.0 {
        return Err(Error::Config("x and T must be non-negative".into()));
    }
    if let Some(t) = t_grid.iter().find(|&&t| t > MAX_VALID_TEMPERATURE) {
        log::warn!("T = {t} is above the low-temperature range; flagged in output");
    }
    let nx = x_grid.len();
    let (distances, residuals): (Vec<f64>, Vec<f64>) = (0..t_grid.len() * nx)
        .into_par_iter()
        .map(|k| {
            let (t, x) = (t_grid[k / nx], x_grid[k % nx]);
            distance_and_residual(x, t, y, z).map_err(|e| Error::GridPoint {
                coords: format!("T={t}, x={x}"),
                source: Box::new(e),
            })
        })
        .collect::<Vec<Result<(f64, f64)>>>()
        .into_iter()
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(distances.len());
    for (it, &t) in t_grid.iter().enumerate() {
        let d = &distances[it * nx..(it + 1) * nx];
        let dd = abs_derivative(x_grid, d);
        let flag = if t > MAX_VALID_TEMPERATURE { 1.0 } else { 0.0 };
        for i in 0..nx {
            rows.push(vec![t, x_grid[i], d[i], dd[i], flag]);
        }
    }
    Ok(SweepResult {
        header: THERMAL_HEADER.iter().map(|s| s.to_string()).collect(),
        rows,
        residuals,
    })
}

/// 3-point moving average, endpoints kept.
pub fn smooth3(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| if i == 0 || i + 1 == n { v[i] } else { (v[i - 1] + v[i] + v[i + 1]) / 3.0 })
        .collect()
}

/// Strict interior local maxima after 3-point smoothing.
pub fn count_interior_peaks(v: &[f64]) -> usize {
    let s = smooth3(v);
    (1..s.len().saturating_sub(1)).filter(|&i| s[i] > s[i - 1] && s[i] > s[i + 1]).count()
}

/// Central difference with step `h` and its step-halving Richardson
/// extrapolation (4·D(h/2) − D(h))/3.
pub fn richardson_check(x: f64, h: f64, t: f64, y: f64, z: f64) -> Result<(f64, f64)> {
    let central = |h: f64| -> Result<f64> {
        Ok((distance_at(x + h, t, y, z)? - distance_at(x - h, t, y, z)?) / (2.0 * h))
    };
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    Ok((coarse, (4.0 * fine - coarse) / 3.0))
}
