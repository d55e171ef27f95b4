//! Strict JSON run configuration for the command-line front end.
//!
//! ```json
//! {"command": "sweep",
//!  "model": {"model": "pair_eff", "n_sites": 2, "Gamma": [1, 76, 1],
//!            "x": [[5, 0], [0, 0], [5, 0]], "y": [0, 0, 0], "z": [1.76, 1.01, 1.76]},
//!  "plan": {"axes": [{"path": "x[0].arg", "grid": {"start": 0, "stop": 6.283185307179586, "points": 41}}],
//!           "observables": [{"kind": "concurrence", "sites": [0, 1]}]},
//!  "workers": 4}
//! ```

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::experiments::{Axis, Grid, Observable, OptimizeSettings, SweepPlan};
use crate::models::presets::{THERMAL_Y, THERMAL_Z};
use crate::models::{MicroParams, ModelSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Solve,
    Sweep,
    Optimize,
    Thermal,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Solve => "solve",
            Self::Sweep => "sweep",
            Self::Optimize => "optimize",
            Self::Thermal => "thermal",
            Self::Validate => "validate",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(Value::String(s.to_string()))
            .map_err(|_| Error::Config(format!("unknown command `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    /// Command-specific settings, checked against the command's schema.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSettings {
    pub axes: Vec<Axis>,
    pub observables: Vec<Observable>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalSettings {
    pub x: Grid,
    #[serde(rename = "T")]
    pub t: Grid,
    #[serde(default = "default_y")]
    pub y: f64,
    #[serde(default = "default_z")]
    pub z: f64,
}

fn default_y() -> f64 {
    THERMAL_Y
}

fn default_z() -> f64 {
    THERMAL_Z
}

/// A fully checked unit of work.
#[derive(Clone, Debug, PartialEq)]
pub enum Job {
    Solve(ModelSpec),
    Sweep(SweepPlan),
    Optimize { model: ModelSpec, settings: OptimizeSettings },
    Thermal(ThermalSettings),
    Validate(MicroParams),
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    /// Resolves the command (the CLI argument must agree with the file, if
    /// both are given) and parses the plan for it.
    pub fn job(&self, cli_command: Option<Command>) -> Result<(Command, Job)> {
        let command = match (cli_command, self.command) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Config(format!(
                    "command `{}` does not match config command `{}`",
                    a.name(),
                    b.name()
                )))
            }
            (Some(c), _) | (None, Some(c)) => c,
            (None, None) => return Err(Error::Config("no command given".into())),
        };
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be positive".into()));
        }
        let model = || {
            self.model
                .clone()
                .ok_or_else(|| Error::Config(format!("`{}` needs a model", command.name())))
        };
        let plan = || {
            self.plan
                .clone()
                .ok_or_else(|| Error::Config(format!("`{}` needs a plan", command.name())))
        };
        let job = match command {
            Command::Solve => {
                if self.plan.is_some() {
                    return Err(Error::Config("`solve` takes no plan".into()));
                }
                Job::Solve(model()?)
            }
            Command::Sweep => {
                let s: SweepSettings = from_value(plan()?)?;
                Job::Sweep(SweepPlan { model: model()?, axes: s.axes, observables: s.observables })
            }
            Command::Optimize => Job::Optimize { model: model()?, settings: from_value(plan()?)? },
            Command::Thermal => {
                if self.model.is_some() {
                    return Err(Error::Config("`thermal` builds its own models; remove `model`".into()));
                }
                Job::Thermal(from_value(plan()?)?)
            }
            Command::Validate => {
                if self.plan.is_some() {
                    return Err(Error::Config("`validate` takes no plan".into()));
                }
                match model()? {
                    ModelSpec::Micro(p) => Job::Validate(p),
                    other => {
                        return Err(Error::Config(format!(
                            "`validate` needs a micro model, got `{}`",
                            other.name()
                        )))
                    }
                }
            }
        };
        Ok((command, job))
    }
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Config(format!("plan: {e}")))
}
