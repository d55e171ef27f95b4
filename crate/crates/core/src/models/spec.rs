use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

use super::build::{
    build_full_micro, build_pair_effective, build_pair_thermal, build_ring3_effective, Model,
};
use super::params::{EffectiveParams, MicroParams};

/// Declarative description of one model, as read from JSON.
///
/// ```json
/// {"model": "pair_eff", "n_sites": 2, "Gamma": [1, 76, 1],
///  "x": [[5, 0], [0, 0], [-5, 0]], "y": [0, 0, 0], "z": [1.76, 1.01, 1.76]}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    Ring3Eff(EffectiveParams),
    PairEff(EffectiveParams),
    PairThermal(EffectiveParams),
    Micro(MicroParams),
}

impl ModelSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(s)?;
        Ok(spec)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Ring3Eff(_) => "ring3_eff",
            Self::PairEff(_) => "pair_eff",
            Self::PairThermal(_) => "pair_thermal",
            Self::Micro(_) => "micro",
        }
    }

    pub fn build(&self) -> Result<Model> {
        match self {
            Self::Ring3Eff(p) => build_ring3_effective(p),
            Self::PairEff(p) => build_pair_effective(p),
            Self::PairThermal(p) => build_pair_thermal(p),
            Self::Micro(p) => build_full_micro(p),
        }
    }

    pub fn get(&self, path: &ParamPath) -> Result<f64> {
        match self {
            Self::Micro(p) => micro_slot_mut(&mut p.clone(), path).map(|v| *v),
            Self::Ring3Eff(p) | Self::PairEff(p) | Self::PairThermal(p) => {
                match effective_slot(p, path)? {
                    Slot::Real(v) => Ok(v),
                    Slot::Complex(z, c) => Ok(c.get(z)),
                }
            }
        }
    }

    pub fn set(&mut self, path: &ParamPath, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!("{path} = {value}")));
        }
        match self {
            Self::Micro(p) => *micro_slot_mut(p, path)? = value,
            Self::Ring3Eff(p) | Self::PairEff(p) | Self::PairThermal(p) => {
                match effective_slot_mut(p, path)? {
                    SlotMut::Real(v) => *v = value,
                    SlotMut::Complex(z, c) => c.set(z, value),
                }
            }
        }
        Ok(())
    }
}

/// Component of a complex parameter addressed by a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Re,
    Im,
    Abs,
    Arg,
}

impl Component {
    fn get(self, z: C64) -> f64 {
        match self {
            Self::Re => z.re,
            Self::Im => z.im,
            Self::Abs => z.norm(),
            Self::Arg => z.arg(),
        }
    }

    fn set(self, z: &mut C64, v: f64) {
        *z = match self {
            Self::Re => C64::new(v, z.im),
            Self::Im => C64::new(z.re, v),
            Self::Abs => C64::from_polar(v, z.arg()),
            Self::Arg => C64::from_polar(z.norm(), v),
        };
    }
}

/// Address of a scalar model parameter: `field`, `field[i]` or
/// `field[i].re|im|abs|arg` (the last form only for complex drives `x`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPath {
    pub field: String,
    pub index: Option<usize>,
    pub component: Option<Component>,
}

impl ParamPath {
    pub fn scalar(field: &str) -> Self {
        Self { field: field.to_string(), index: None, component: None }
    }
}

impl FromStr for ParamPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Path { path: s.to_string(), reason: reason.into() };
        let (head, component) = match s.rsplit_once('.') {
            Some((head, comp)) => {
                let c = match comp {
                    "re" => Component::Re,
                    "im" => Component::Im,
                    "abs" => Component::Abs,
                    "arg" => Component::Arg,
                    _ => return Err(fail("unknown component")),
                };
                (head, Some(c))
            }
            None => (s, None),
        };
        let (field, index) = match head.find('[') {
            Some(open) => {
                let rest = &head[open + 1..];
                let close = rest.strip_suffix(']').ok_or_else(|| fail("missing `]`"))?;
                let idx: usize = close.parse().map_err(|_| fail("bad index"))?;
                (&head[..open], Some(idx))
            }
            None => (head, None),
        };
        if field.is_empty() || !field.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(fail("bad field name"));
        }
        Ok(Self { field: field.to_string(), index, component })
    }
}

impl fmt::Display for ParamPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field)?;
        if let Some(i) = self.index {
            write!(f, "[{i}]")?;
        }
        if let Some(c) = self.component {
            let name = match c {
                Component::Re => "re",
                Component::Im => "im",
                Component::Abs => "abs",
                Component::Arg => "arg",
            };
            write!(f, ".{name}")?;
        }
        Ok(())
    }
}

impl Serialize for ParamPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ParamPath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

enum Slot {
    Real(f64),
    Complex(C64, Component),
}

enum SlotMut<'a> {
    Real(&'a mut f64),
    Complex(&'a mut C64, Component),
}

fn path_err(path: &ParamPath, reason: &str) -> Error {
    Error::Path { path: path.to_string(), reason: reason.into() }
}

fn indexed<'a, T>(v: &'a mut [T], path: &ParamPath) -> Result<&'a mut T> {
    let i = path.index.ok_or_else(|| path_err(path, "index required"))?;
    v.get_mut(i).ok_or_else(|| path_err(path, "index out of range"))
}

fn effective_slot_mut<'a>(p: &'a mut EffectiveParams, path: &ParamPath) -> Result<SlotMut<'a>> {
    let real_only = |path: &ParamPath| {
        if path.component.is_some() {
            Err(path_err(path, "component only applies to x"))
        } else {
            Ok(())
        }
    };
    match path.field.as_str() {
        "x" => {
            let c = path.component.ok_or_else(|| path_err(path, "x needs .re/.im/.abs/.arg"))?;
            Ok(SlotMut::Complex(indexed(&mut p.x, path)?, c))
        }
        "Gamma" => {
            real_only(path)?;
            Ok(SlotMut::Real(indexed(&mut p.gamma, path)?))
        }
        "y" => {
            real_only(path)?;
            Ok(SlotMut::Real(indexed(&mut p.y, path)?))
        }
        "z" => {
            real_only(path)?;
            Ok(SlotMut::Real(indexed(&mut p.z, path)?))
        }
        "n_p" => {
            real_only(path)?;
            if path.index.is_some() {
                return Err(path_err(path, "n_p is a scalar"));
            }
            Ok(SlotMut::Real(&mut p.n_p))
        }
        _ => Err(path_err(path, "unknown effective-model field")),
    }
}

fn effective_slot(p: &EffectiveParams, path: &ParamPath) -> Result<Slot> {
    let mut copy = p.clone();
    Ok(match effective_slot_mut(&mut copy, path)? {
        SlotMut::Real(v) => Slot::Real(*v),
        SlotMut::Complex(z, c) => Slot::Complex(*z, c),
    })
}

fn micro_slot_mut<'a>(p: &'a mut MicroParams, path: &ParamPath) -> Result<&'a mut f64> {
    if path.component.is_some() {
        return Err(path_err(path, "micro parameters are real"));
    }
    let scalar = |path: &ParamPath| {
        if path.index.is_some() {
            Err(path_err(path, "field is a scalar"))
        } else {
            Ok(())
        }
    };
    match path.field.as_str() {
        "J" => indexed(&mut p.j, path),
        "alpha" => indexed(&mut p.alpha, path),
        "phi" => indexed(&mut p.phi, path),
        "omega_c" => indexed(&mut p.omega_c, path),
        "omega_p" => indexed(&mut p.omega_p, path),
        "kappa" => scalar(path).map(|_| &mut p.kappa),
        "gamma_p" => scalar(path).map(|_| &mut p.gamma_p),
        "omega_d" => scalar(path).map(|_| &mut p.omega_d),
        "n_c" => scalar(path).map(|_| &mut p.n_c),
        "n_p" => scalar(path).map(|_| &mut p.n_p),
        _ => Err(path_err(path, "unknown micro-model field")),
    }
}
