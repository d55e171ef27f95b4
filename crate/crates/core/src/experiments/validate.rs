use crate::error::{Error, Result};
use crate::linalg::{partial_trace, DensityMatrix};
use crate::models::{build_full_micro, derive_effective, Geometry, MicroParams, ModelSpec};
use crate::observables::trace_distance;
use crate::steadystate::relax;

/// Effective model matching a microscopic geometry.
pub fn effective_spec(micro: &MicroParams) -> Result<ModelSpec> {
    let params = derive_effective(micro)?;
    Ok(match micro.geometry()? {
        Geometry::Ring => ModelSpec::Ring3Eff(params),
        Geometry::SingleGuide => ModelSpec::PairThermal(params),
        Geometry::ThreeGuide => ModelSpec::PairEff(params),
    })
}

/// Valid parameters with every Jᵢ ≤ 0.1κ.
pub fn check_regime(micro: &MicroParams) -> Result<()> {
    micro.validate()?;
    if let Some(j) = micro.j.iter().find(|&&j| j > 0.1 * micro.kappa) {
        return Err(Error::InvalidParameter(format!(
            "J = {j} exceeds 0.1 kappa; adiabatic elimination does not apply"
        )));
    }
    Ok(())
}

/// Trace distance between the polariton marginal of the microscopic
/// steady state, reached by time evolution from the ground state, and the
/// steady state of the derived effective model.
pub fn validate_effective(micro: &MicroParams) -> Result<f64> {
    check_regime(micro)?;
    let full = build_full_micro(micro)?;
    let ground = DensityMatrix::basis(full.space.clone(), 0)?;
    let relaxed = relax(&full.liouvillian()?, &ground)?;
    let marginal = partial_trace(&relaxed, &full.polariton_factors)?;

    let effective = effective_spec(micro)?.build()?.steady_state()?;
    trace_distance(&marginal, &effective.rho)
}
