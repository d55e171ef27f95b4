use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{partial_trace, DensityMatrix};
use crate::models::{Model, ModelSpec, ParamPath};
use crate::observables::{gibbs_two_qubit, pair_concurrence, trace_distance, ThermalSpec};
use crate::steadystate::SteadyStateReport;

/// Grid values, either listed or as an inclusive linspace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Linspace { start: f64, stop: f64, points: usize },
}

impl Grid {
    pub fn linspace(start: f64, stop: f64, points: usize) -> Self {
        Self::Linspace { start, stop, points }
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            Self::Values(ref v) => v.clone(),
            Self::Linspace { start, stop, points } => linspace(start, stop, points),
        }
    }
}

pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { stop } else { start + step * i as f64 }).collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub path: ParamPath,
    pub grid: Grid,
}

/// Quantities evaluated on each steady state. Site indices count
/// polaritons (two-level sites), not Hilbert-space factors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Observable {
    Concurrence { sites: [usize; 2] },
    /// Distance of the two-polariton state to the Gibbs state at the
    /// temperature matching the model's `n_p` (ω = 1).
    TraceDistanceToGibbs,
    Purity,
    Population { site: usize, level: usize },
}

impl Observable {
    pub fn column_name(&self) -> String {
        match self {
            Self::Concurrence { sites: [a, b] } => format!("concurrence_{a}_{b}"),
            Self::TraceDistanceToGibbs => "trace_distance_to_gibbs".into(),
            Self::Purity => "purity".into(),
            Self::Population { site, level } => format!("population_{site}_{level}"),
        }
    }

    fn check(&self, model: &Model) -> Result<()> {
        let n = model.polariton_factors.len();
        let bad = match self {
            Self::Concurrence { sites: [a, b] } => a == b || *a >= n || *b >= n,
            Self::TraceDistanceToGibbs => n != 2,
            Self::Purity => false,
            Self::Population { site, level } => *site >= n || *level >= 2,
        };
        if bad {
            return Err(Error::InvalidParameter(format!(
                "observable {} does not apply to a model with {n} sites",
                self.column_name()
            )));
        }
        Ok(())
    }

    pub fn evaluate(&self, spec: &ModelSpec, model: &Model, rho: &DensityMatrix) -> Result<f64> {
        let pf = &model.polariton_factors;
        match *self {
            Self::Concurrence { sites: [a, b] } => pair_concurrence(rho, pf[a], pf[b]),
            Self::TraceDistanceToGibbs => {
                let n_p = spec.get(&ParamPath::scalar("n_p"))?;
                let gibbs = gibbs_two_qubit(ThermalSpec::from_occupation(1.0, n_p)?)?;
                let reduced = partial_trace(rho, pf)?;
                trace_distance(&reduced, &gibbs)
            }
            Self::Purity => Ok(rho.purity()),
            Self::Population { site, level } => {
                let reduced = partial_trace(rho, &[pf[site]])?;
                Ok(reduced.populations()[level])
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlan {
    pub model: ModelSpec,
    pub axes: Vec<Axis>,
    pub observables: Vec<Observable>,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        for axis in &self.axes {
            let g = axis.grid.values();
            if g.is_empty() {
                return Err(Error::Config(format!("grid for {} is empty", axis.path)));
            }
            if g.iter().any(|v| !v.is_finite()) || g.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Config(format!(
                    "grid for {} must be finite and strictly increasing",
                    axis.path
                )));
            }
            self.model.get(&axis.path)?;
        }
        let model = self.model.build()?;
        for obs in &self.observables {
            obs.check(&model)?;
        }
        Ok(())
    }

    pub fn header(&self) -> Vec<String> {
        self.axes
            .iter()
            .map(|a| a.path.to_string())
            .chain(self.observables.iter().map(Observable::column_name))
            .collect()
    }

    pub fn n_points(&self) -> usize {
        self.axes.iter().map(|a| a.grid.values().len()).product()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Steady-state residual ‖L·vec(ρ)‖ behind each row.
    pub residuals: Vec<f64>,
}

impl SweepResult {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Row index of the largest value in a column (first on ties).
    pub fn argmax(&self, name: &str) -> Option<usize> {
        let col = self.column(name)?;
        let mut best = 0;
        for (i, &v) in col.iter().enumerate() {
            if v > col[best] {
                best = i;
            }
        }
        (!col.is_empty()).then_some(best)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// 12 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.11e}")
}

/// Cartesian-product coordinates of flat index `k`, last axis fastest.
fn coordinates(grids: &[Vec<f64>], mut k: usize) -> Vec<f64> {
    let mut out = vec![0.0; grids.len()];
    for (slot, g) in out.iter_mut().zip(grids).rev() {
        *slot = g[k % g.len()];
        k /= g.len();
    }
    out
}

/// Solves the model at one parameter point.
pub fn solve_point(spec: &ModelSpec) -> Result<(Model, SteadyStateReport)> {
    let model = spec.build()?;
    let report = model.steady_state()?;
    if !report.unique {
        return Err(Error::NonUnique);
    }
    Ok((model, report))
}

fn evaluate_point(plan: &SweepPlan, coords: &[f64]) -> Result<(Vec<f64>, f64)> {
    let mut spec = plan.model.clone();
    for (axis, &v) in plan.axes.iter().zip(coords) {
        spec.set(&axis.path, v)?;
    }
    let (model, report) = solve_point(&spec)?;
    let mut row = coords.to_vec();
    for obs in &plan.observables {
        let v = obs.evaluate(&spec, &model, &report.rho)?;
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        row.push(v);
    }
    Ok((row, report.residual))
}

/// Evaluates every grid point (in parallel on the current rayon pool) and
/// returns rows in row-major axis order. The first failing point, in that
/// order, is reported with its coordinates.
pub fn run_sweep(plan: &SweepPlan) -> Result<SweepResult> {
    plan.validate()?;
    let grids: Vec<Vec<f64>> = plan.axes.iter().map(|a| a.grid.values()).collect();
    let n = plan.n_points();
    let results: Vec<Result<(Vec<f64>, f64)>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let coords = coordinates(&grids, k);
            evaluate_point(plan, &coords).map_err(|e| {
                let names: Vec<String> = plan
                    .axes
                    .iter()
                    .zip(&coords)
                    .map(|(a, v)| format!("{}={v}", a.path))
                    .collect();
                Error::GridPoint { coords: names.join(", "), source: Box::new(e) }
            })
        })
        .collect();
    let (rows, residuals) = results.into_iter().collect::<Result<(Vec<_>, Vec<_>)>>()?;
    Ok(SweepResult { header: plan.header(), rows, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::presets;

    fn phase_plan(points: usize) -> SweepPlan {
        SweepPlan {
            model: presets::entangling_pair(0.0, 0.0),
            axes: vec![
                Axis { path: "x[0].arg".parse().unwrap(), grid: Grid::linspace(0.0, 6.0, points) },
                Axis { path: "x[2].arg".parse().unwrap(), grid: Grid::linspace(0.0, 6.0, points) },
            ],
            observables: vec![Observable::Concurrence { sites: [0, 1] }, Observable::Purity],
        }
    }

    #[test]
    fn row_major_order() {
        let res = run_sweep(&phase_plan(3)).unwrap();
        assert_eq!(res.rows.len(), 9);
        assert_eq!(res.header, ["x[0].arg", "x[2].arg", "concurrence_0_1", "purity"]);
        assert_eq!((res.rows[1][0], res.rows[1][1]), (0.0, 3.0));
        assert_eq!((res.rows[3][0], res.rows[3][1]), (3.0, 0.0));
    }

    #[test]
    fn single_point_is_a_single_solve() {
        let mut plan = phase_plan(1);
        plan.axes[0].grid = Grid::Values(vec![std::f64::consts::PI]);
        let res = run_sweep(&plan).unwrap();
        let (model, rep) = solve_point(&presets::entangling_pair(std::f64::consts::PI, 0.0)).unwrap();
        let c = pair_concurrence(&rep.rho, model.polariton_factors[0], model.polariton_factors[1]).unwrap();
        assert_eq!(res.rows[0][2], c);
    }

    #[test]
    fn bad_plans() {
        let mut plan = phase_plan(3);
        plan.axes[0].grid = Grid::Values(vec![1.0, 1.0]);
        assert!(run_sweep(&plan).is_err());
        let mut plan = phase_plan(3);
        plan.observables.push(Observable::Concurrence { sites: [0, 2] });
        assert!(run_sweep(&plan).is_err());
        let mut plan = phase_plan(3);
        plan.axes[0].path = "q".parse().unwrap();
        assert!(run_sweep(&plan).is_err());
    }

    #[test]
    fn failing_point_reports_coordinates() {
        let mut plan = phase_plan(1);
        plan.axes[1] = Axis { path: "z[1]".parse().unwrap(), grid: Grid::Values(vec![0.5]) };
        match run_sweep(&plan) {
            Err(Error::GridPoint { coords, .. }) => assert!(coords.contains("z[1]=0.5")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_format() {
        let r = SweepResult {
            header: vec!["a".into(), "b".into()],
            rows: vec![vec![0.47, -1.0]],
            residuals: vec![0.0],
        };
        assert_eq!(r.to_csv(), "a,b\n4.70000000000e-1,-1.00000000000e0\n");
    }
}
