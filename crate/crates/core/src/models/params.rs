use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Microscopic parameters: polaritons, waveguide modes and drives, in the
/// frame rotating at `omega_d`.
///
/// The geometry follows from `n_sites` and the number of guides
/// (`J.len()`): 3 sites / 3 guides is the ring, 2 sites / 1 guide is the
/// single shared waveguide, 2 sites / 3 guides has one outer guide per
/// site plus a shared middle guide.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MicroParams {
    pub n_sites: usize,
    #[serde(rename = "J")]
    pub j: Vec<f64>,
    pub kappa: f64,
    pub gamma_p: f64,
    pub alpha: Vec<f64>,
    pub phi: Vec<f64>,
    pub omega_c: Vec<f64>,
    pub omega_p: Vec<f64>,
    pub omega_d: f64,
    pub n_boson: usize,
    #[serde(default)]
    pub n_c: f64,
    #[serde(default)]
    pub n_p: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    /// Three sites, guide i couples sites i and i+1 (cyclic).
    Ring,
    /// Two sites sharing one guide.
    SingleGuide,
    /// Two sites, guides 1 and 3 on the outer sides, guide 2 shared.
    ThreeGuide,
}

impl MicroParams {
    pub fn geometry(&self) -> Result<Geometry> {
        match (self.n_sites, self.j.len()) {
            (3, 3) => Ok(Geometry::Ring),
            (2, 1) => Ok(Geometry::SingleGuide),
            (2, 3) => Ok(Geometry::ThreeGuide),
            (s, g) => Err(Error::InvalidParameter(format!(
                "unsupported geometry: {s} sites with {g} guides"
            ))),
        }
    }

    pub fn n_guides(&self) -> usize {
        self.j.len()
    }

    pub fn validate(&self) -> Result<Geometry> {
        let geometry = self.geometry()?;
        let guides = self.n_guides();
        for (name, len, want) in [
            ("alpha", self.alpha.len(), guides),
            ("phi", self.phi.len(), guides),
            ("omega_c", self.omega_c.len(), guides),
            ("omega_p", self.omega_p.len(), self.n_sites),
        ] {
            if len != want {
                return Err(Error::InvalidParameter(format!(
                    "{name} has {len} entries, expected {want}"
                )));
            }
        }
        let finite = self
            .j
            .iter()
            .chain(&self.alpha)
            .chain(&self.phi)
            .chain(&self.omega_c)
            .chain(&self.omega_p)
            .chain([&self.kappa, &self.gamma_p, &self.omega_d, &self.n_c, &self.n_p])
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("non-finite micro parameter".into()));
        }
        if self.j.iter().chain(&self.alpha).any(|&r| r < 0.0)
            || self.kappa < 0.0
            || self.gamma_p < 0.0
        {
            return Err(Error::InvalidParameter("rates must be non-negative".into()));
        }
        if self.n_c < 0.0 || self.n_p < 0.0 {
            return Err(Error::InvalidParameter("thermal occupations must be >= 0".into()));
        }
        if self.n_boson < 2 {
            return Err(Error::InvalidParameter("n_boson must be at least 2".into()));
        }
        if !self.is_weak_driving() {
            log::warn!("micro parameters outside the weak-driving regime alpha <= J << kappa");
        }
        Ok(geometry)
    }

    /// αᵢ ≤ Jᵢ ≤ 0.1 κ on every guide.
    pub fn is_weak_driving(&self) -> bool {
        self.j
            .iter()
            .zip(&self.alpha)
            .all(|(&j, &a)| a <= j && j <= 0.1 * self.kappa)
    }
}

/// Parameters of the adiabatically eliminated (polariton-only) models.
///
/// Rates are in units of a reference rate (Γ₁ = 1 by convention).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectiveParams {
    pub n_sites: usize,
    #[serde(rename = "Gamma")]
    pub gamma: Vec<f64>,
    /// Complex drives, serialized as `[re, im]`.
    pub x: Vec<C64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    #[serde(default)]
    pub n_p: f64,
}

impl EffectiveParams {
    pub(crate) fn check_lengths(&self, n_sites: usize, n_guides: usize) -> Result<()> {
        if self.n_sites != n_sites {
            return Err(Error::InvalidParameter(format!(
                "n_sites is {}, model needs {n_sites}",
                self.n_sites
            )));
        }
        for (name, len) in [
            ("Gamma", self.gamma.len()),
            ("x", self.x.len()),
            ("y", self.y.len()),
            ("z", self.z.len()),
        ] {
            if len != n_guides {
                return Err(Error::InvalidParameter(format!(
                    "{name} has {len} entries, expected {n_guides}"
                )));
            }
        }
        let finite = self.gamma.iter().chain(&self.y).chain(&self.z).all(|v| v.is_finite())
            && self.x.iter().all(|v| v.re.is_finite() && v.im.is_finite())
            && self.n_p.is_finite();
        if !finite {
            return Err(Error::InvalidParameter("non-finite effective parameter".into()));
        }
        if self.gamma.iter().any(|&g| g <= 0.0) {
            return Err(Error::InvalidParameter("Gamma entries must be > 0".into()));
        }
        if self.z.iter().any(|&z| z < 1.0) {
            return Err(Error::InvalidParameter("z entries must be >= 1".into()));
        }
        if self.n_p < 0.0 {
            return Err(Error::InvalidParameter(format!("n_p = {} is negative", self.n_p)));
        }
        Ok(())
    }
}

/// Adiabatic-elimination parameters from microscopic ones.
///
/// Γᵢ = 2Jᵢ²κ/(κ²+4Δᵢ²), xᵢ = −αᵢe^{iφᵢ}(2Δᵢ+iκ)/(Jᵢκ), yᵢ = −2Δᵢ/κ.
/// For guides shared by two sites zᵢ = 1+γ/(4Γᵢ); for the single-guide
/// pair z = 1+γ/(2Γ), so that Γ(z−1) equals the polariton decay weight γ/2.
pub fn derive_effective(p: &MicroParams) -> Result<EffectiveParams> {
    let geometry = p.validate()?;
    if p.kappa == 0.0 {
        return Err(Error::InvalidParameter("kappa must be > 0".into()));
    }
    if p.j.iter().any(|&j| j == 0.0) {
        return Err(Error::InvalidParameter("J entries must be > 0".into()));
    }
    let wp = &p.omega_p;
    let detunings: Vec<f64> = match geometry {
        Geometry::Ring => (0..3)
            .map(|i| p.omega_c[i] - (wp[i] + wp[(i + 1) % 3]) / 2.0)
            .collect(),
        Geometry::SingleGuide => vec![p.omega_c[0] - (wp[0] + wp[1]) / 2.0],
        Geometry::ThreeGuide => vec![
            p.omega_c[0] - wp[0],
            p.omega_c[1] - (wp[0] + wp[1]) / 2.0,
            p.omega_c[2] - wp[1],
        ],
    };
    let kappa = p.kappa;
    let mut out = EffectiveParams {
        n_sites: p.n_sites,
        gamma: Vec::new(),
        x: Vec::new(),
        y: Vec::new(),
        z: Vec::new(),
        n_p: p.n_p,
    };
    let z_divisor = if geometry == Geometry::SingleGuide { 2.0 } else { 4.0 };
    for (g, &delta) in detunings.iter().enumerate() {
        let j = p.j[g];
        let gamma = 2.0 * j * j * kappa / (kappa * kappa + 4.0 * delta * delta);
        let drive = C64::from_polar(p.alpha[g], p.phi[g]);
        let x = -drive * C64::new(2.0 * delta, kappa) / (j * kappa);
        out.gamma.push(gamma);
        out.x.push(x);
        out.y.push(-2.0 * delta / kappa);
        out.z.push(1.0 + p.gamma_p / (z_divisor * gamma));
    }
    Ok(out)
}
