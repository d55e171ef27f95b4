use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ModelSpec, ParamPath};
use crate::observables::pair_concurrence;

use super::sweep::solve_point;

pub const DEFAULT_BUDGET: usize = 2000;

/// One optimization variable. All `paths` are set to the same value, which
/// ties parameters together (e.g. |x₁| = |x₃|).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeParam {
    pub paths: Vec<ParamPath>,
    pub lower: f64,
    pub upper: f64,
}

impl FreeParam {
    pub fn new(paths: &[&str], lower: f64, upper: f64) -> Result<Self> {
        let paths = paths.iter().map(|p| p.parse()).collect::<Result<Vec<_>>>()?;
        Ok(Self { paths, lower, upper })
    }

    pub fn name(&self) -> String {
        self.paths.iter().map(ToString::to_string).collect::<Vec<_>>().join("=")
    }
}

fn default_sites() -> [usize; 2] {
    [0, 1]
}

fn default_budget() -> usize {
    DEFAULT_BUDGET
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSettings {
    pub free: Vec<FreeParam>,
    #[serde(default = "default_sites")]
    pub sites: [usize; 2],
    #[serde(default = "default_budget")]
    pub budget: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub params: Vec<f64>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub names: Vec<String>,
    pub best_params: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
    /// Every improvement of the running best, in order.
    pub trace: Vec<TracePoint>,
}

/// Model with the free parameters set to `params`.
pub fn apply_params(model: &ModelSpec, free: &[FreeParam], params: &[f64]) -> Result<ModelSpec> {
    let mut spec = model.clone();
    for (f, &v) in free.iter().zip(params) {
        for path in &f.paths {
            spec.set(path, v)?;
        }
    }
    Ok(spec)
}

/// Steady-state concurrence of polariton pair `sites` at `params`.
pub fn concurrence_at(
    model: &ModelSpec,
    free: &[FreeParam],
    sites: [usize; 2],
    params: &[f64],
) -> Result<f64> {
    let spec = apply_params(model, free, params)?;
    let (m, rep) = solve_point(&spec)?;
    let pf = &m.polariton_factors;
    if sites[0] >= pf.len() || sites[1] >= pf.len() {
        return Err(Error::InvalidParameter(format!("sites {sites:?} out of range")));
    }
    pair_concurrence(&rep.rho, pf[sites[0]], pf[sites[1]])
}

struct Objective<'a> {
    model: &'a ModelSpec,
    settings: &'a OptimizeSettings,
    active: Vec<usize>,
    evaluations: usize,
    best: Option<TracePoint>,
    trace: Vec<TracePoint>,
}

impl Objective<'_> {
    /// Physical parameters from unit-box coordinates of the active dims.
    fn params(&self, u: &[f64]) -> Vec<f64> {
        let mut p: Vec<f64> = self.settings.free.iter().map(|f| f.lower).collect();
        for (&i, &ui) in self.active.iter().zip(u) {
            let f = &self.settings.free[i];
            p[i] = f.lower + ui.clamp(0.0, 1.0) * (f.upper - f.lower);
        }
        p
    }

    fn exhausted(&self) -> bool {
        self.evaluations >= self.settings.budget
    }

    fn eval(&mut self, u: &[f64]) -> f64 {
        let params = self.params(u);
        self.evaluations += 1;
        let value = match concurrence_at(self.model, &self.settings.free, self.settings.sites, &params) {
            Ok(v) if v.is_finite() => v,
            Ok(_) => f64::NEG_INFINITY,
            Err(e) => {
                log::debug!("objective failed at {params:?}: {e}");
                f64::NEG_INFINITY
            }
        };
        if self.best.as_ref().map_or(true, |b| value > b.value) {
            let point = TracePoint { params, value };
            self.trace.push(point.clone());
            self.best = Some(point);
        }
        value
    }
}

/// Start points in the unit box: the center, then corners of the inner
/// box at 1/4 and 3/4, at most 8 per dimension.
fn start_points(n: usize) -> Vec<Vec<f64>> {
    let mut starts = vec![vec![0.5; n]];
    let n_corners = if n >= usize::BITS as usize - 1 { usize::MAX } else { 1usize << n };
    for mask in 0..n_corners.min(8 * n) {
        starts.push((0..n).map(|i| if mask >> i & 1 == 1 { 0.75 } else { 0.25 }).collect());
    }
    starts
}

/// Bounded Nelder–Mead maximization in the unit box, stopping at
/// `budget` total evaluations or when the simplex collapses.
fn nelder_mead(obj: &mut Objective<'_>, start: &[f64], f_start: f64, budget: usize) {
    let n = start.len();
    let step = 0.1;
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(start.to_vec(), f_start)];
    for i in 0..n {
        if obj.exhausted() || obj.evaluations >= budget {
            return;
        }
        let mut v = start.to_vec();
        v[i] = if v[i] + step <= 1.0 { v[i] + step } else { v[i] - step };
        let f = obj.eval(&v);
        simplex.push((v, f));
    }
    let clamp = |v: Vec<f64>| v.into_iter().map(|x| x.clamp(0.0, 1.0)).collect::<Vec<_>>();
    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
    };
    while obj.evaluations < budget && !obj.exhausted() {
        // best first; stable on ties
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let spread = simplex[0].1 - simplex[n].1;
        let size = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if (spread.is_finite() && spread <= 1e-12 && size <= 1e-6) || size <= 1e-10 {
            return;
        }
        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflected = clamp(lerp(&centroid, &worst.0, -1.0));
        let fr = obj.eval(&reflected);
        if fr > simplex[0].1 {
            if obj.evaluations >= budget {
                simplex[n] = (reflected, fr);
                continue;
            }
            let expanded = clamp(lerp(&centroid, &worst.0, -2.0));
            let fe = obj.eval(&expanded);
            simplex[n] = if fe > fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr > simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        if obj.evaluations >= budget {
            return;
        }
        // outside contraction must beat the reflection, inside the worst
        let (target, threshold) =
            if fr > worst.1 { (reflected.as_slice(), fr) } else { (worst.0.as_slice(), worst.1) };
        let contracted = lerp(&centroid, target, 0.5);
        let fc = obj.eval(&contracted);
        if fc > threshold {
            simplex[n] = (contracted, fc);
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            if obj.evaluations >= budget {
                return;
            }
            let v = lerp(&best, &vertex.0, 0.5);
            let f = obj.eval(&v);
            *vertex = (v, f);
        }
    }
}

/// Maximizes steady-state concurrence over the free parameters.
///
/// Deterministic: starts are evaluated in a fixed order, then Nelder–Mead
/// runs from the best few of them, sharing the remaining budget.
pub fn optimize_concurrence(model: &ModelSpec, settings: &OptimizeSettings) -> Result<OptimizeReport> {
    if settings.budget == 0 {
        return Err(Error::Config("optimizer budget must be at least 1".into()));
    }
    for f in &settings.free {
        if !(f.lower.is_finite() && f.upper.is_finite() && f.lower <= f.upper) {
            return Err(Error::Config(format!("bad bounds [{}, {}] for {}", f.lower, f.upper, f.name())));
        }
        if f.paths.is_empty() {
            return Err(Error::Config("free parameter without paths".into()));
        }
        for p in &f.paths {
            model.get(p)?;
        }
    }
    let active: Vec<usize> = (0..settings.free.len())
        .filter(|&i| settings.free[i].upper > settings.free[i].lower)
        .collect();
    let mut obj = Objective {
        model,
        settings,
        active,
        evaluations: 0,
        best: None,
        trace: Vec::new(),
    };
    let n = obj.active.len();
    if n == 0 {
        obj.eval(&[]);
    } else {
        let mut scored = Vec::new();
        for s in start_points(n) {
            if obj.exhausted() {
                break;
            }
            let f = obj.eval(&s);
            scored.push((s, f));
        }
        scored.sort_by(|a, b| b.1.total_cmp(&a.1));
        let runs = scored.len().min(4);
        for (k, (s, f)) in scored.into_iter().take(runs).enumerate() {
            let remaining = settings.budget.saturating_sub(obj.evaluations);
            let share = remaining / (runs - k);
            let stop = obj.evaluations + share;
            nelder_mead(&mut obj, &s, f, stop);
        }
    }
    let best = obj.best.expect("at least one evaluation");
    Ok(OptimizeReport {
        names: settings.free.iter().map(FreeParam::name).collect(),
        best_params: best.params,
        best_value: best.value,
        evaluations: obj.evaluations,
        trace: obj.trace,
    })
}
