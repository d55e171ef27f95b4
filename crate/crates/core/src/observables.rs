//! Entanglement and distance measures on density matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    herm_eig, kron, partial_trace, singular_values, ComplexMatrix, DensityMatrix, HilbertSpace, C64,
};

/// Eigenvalues of an input state may dip this far below zero.
const PSD_TOL: f64 = 1e-8;

/// Wootters concurrence of a two-qubit state.
///
/// C = max(0, λ₁ − λ₂ − λ₃ − λ₄) with λ the decreasing eigenvalues of
/// √(√ρ ρ̃ √ρ), ρ̃ = (σy⊗σy) ρ* (σy⊗σy). With ρ = W W† and W = V √diag(p),
/// the λ are the singular values of Wᵀ(σy⊗σy)W, which avoids taking square
/// roots of tiny eigenvalues.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.space().factor_dims() != [2, 2] {
        return Err(Error::Dimension(format!(
            "concurrence needs two qubits, got factors {:?}",
            rho.space().factor_dims()
        )));
    }
    let eig = herm_eig(rho.matrix())?;
    if eig.values[0] < -PSD_TOL {
        return Err(Error::NegativeEigenvalue { value: eig.values[0] });
    }
    let mut w = eig.vectors;
    for (k, p) in eig.values.iter().enumerate() {
        let root = p.max(0.0).sqrt();
        for i in 0..4 {
            w[(i, k)] *= root;
        }
    }
    let mut sy = ComplexMatrix::zeros(2, 2);
    sy[(0, 1)] = C64::new(0.0, -1.0);
    sy[(1, 0)] = C64::new(0.0, 1.0);
    let tau = &(&w.transpose() * &kron(&sy, &sy)) * &w;
    let lambda = singular_values(&tau);
    Ok((lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0))
}

/// Concurrence of the reduced state of factors `a` and `b`.
pub fn pair_concurrence(rho: &DensityMatrix, a: usize, b: usize) -> Result<f64> {
    if a == b {
        return Err(Error::InvalidParameter("concurrence of a site with itself".into()));
    }
    let reduced = partial_trace(rho, &[a, b])?;
    concurrence(&reduced)
}

/// ½‖ρ − σ‖₁
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    let diff = (rho.matrix() - sigma.matrix()).hermitian_part();
    Ok(0.5 * herm_eig(&diff)?.values.iter().map(|v| v.abs()).sum::<f64>())
}

/// Thermal bath for two uncoupled two-level sites of splitting `omega`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalSpec {
    pub omega: f64,
    pub temperature: f64,
}

impl ThermalSpec {
    /// Temperature at which the Bose-Einstein occupation equals `n`.
    pub fn from_occupation(omega: f64, n: f64) -> Result<Self> {
        if !(omega > 0.0 && n >= 0.0 && n.is_finite()) {
            return Err(Error::InvalidParameter(format!("omega = {omega}, n = {n}")));
        }
        let temperature = if n == 0.0 { 0.0 } else { omega / (1.0 / n).ln_1p() };
        Ok(Self { omega, temperature })
    }

    pub fn occupation(&self) -> f64 {
        thermal_occupation(self.omega, self.temperature)
    }
}

/// Bose-Einstein occupation 1/(e^{ω/T} − 1); zero at T = 0.
pub fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (omega / temperature).exp_m1()
}

/// Gibbs state of H = ω(σ₁⁺σ₁⁻ + σ₂⁺σ₂⁻), ground state at index 0.
pub fn gibbs_two_qubit(spec: ThermalSpec) -> Result<DensityMatrix> {
    if !(spec.omega.is_finite() && spec.temperature >= 0.0 && spec.temperature.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "omega = {}, T = {}",
            spec.omega, spec.temperature
        )));
    }
    // per-site Boltzmann ratio p_e/p_g
    let r = if spec.temperature == 0.0 { 0.0 } else { (-spec.omega / spec.temperature).exp() };
    let site = [1.0 / (1.0 + r), r / (1.0 + r)];
    let probs = [site[0] * site[0], site[0] * site[1], site[1] * site[0], site[1] * site[1]];
    DensityMatrix::from_diag(HilbertSpace::qubits(2), &probs)
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

pub fn populations(rho: &DensityMatrix) -> Vec<f64> {
    rho.populations()
}
