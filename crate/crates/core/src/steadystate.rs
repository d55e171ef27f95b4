//! Steady states of Liouvillians: a trace-constrained least-squares solve,
//! plus a fixed-step RK4 integrator used as an independent cross-check.

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, vec_norm, ColPivQr, ComplexMatrix, DensityMatrix, HilbertSpace, C64};
use crate::liouvillian::{unvectorize, vec_identity, vectorize, Superoperator};
use crate::models::Model;

/// Accepted steady-state residual, relative to ‖L‖.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Negative eigenvalues above this are clamped to zero.
pub const CLAMP_TOL: f64 = 1e-8;
/// Relative pivot size below which the kernel is considered degenerate.
pub const UNIQUENESS_TOL: f64 = 1e-10;
/// Largest admissible dt·‖L‖ for RK4.
pub const STABILITY_LIMIT: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct SteadyStateReport {
    pub rho: DensityMatrix,
    /// ‖L·vec(ρ)‖₂ for the returned (post-processed) state.
    pub residual: f64,
    pub min_eigenvalue: f64,
    pub unique: bool,
}

/// Steady state on a single unstructured factor of dimension `l.dim()`.
pub fn steady_state(l: &Superoperator) -> Result<SteadyStateReport> {
    steady_state_on(l, &HilbertSpace::new(vec![l.dim()])?)
}

/// Solves `[L; vec(I)†]·vec(ρ) = [0; 1]` by pivoted-QR least squares, then
/// symmetrizes, clamps round-off negativity and renormalizes.
pub fn steady_state_on(l: &Superoperator, space: &HilbertSpace) -> Result<SteadyStateReport> {
    let d = l.dim();
    if space.dim() != d {
        return Err(Error::Dimension(format!(
            "space of dimension {} for a superoperator on {d}",
            space.dim()
        )));
    }
    let n = d * d;
    let norm = l.norm();
    let mut data = Vec::with_capacity((n + 1) * n);
    data.extend_from_slice(l.matrix().as_slice());
    data.extend(vec_identity(d).iter().map(|z| z.conj()));
    let system = ComplexMatrix::from_vec(n + 1, n, data)?;
    let mut rhs = vec![C64::new(0.0, 0.0); n + 1];
    rhs[n] = C64::new(1.0, 0.0);

    let qr = ColPivQr::factor(&system)?;
    let diag = qr.r_diag_abs();
    let min_pivot = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let unique = min_pivot > UNIQUENESS_TOL * norm.max(1.0);
    let rank = if unique { n } else { qr.rank(UNIQUENESS_TOL).max(1) };
    let x = qr.solve_basic(&rhs, rank);

    let raw = unvectorize(&x, d).hermitian_part();
    let rho = match clean_state(raw) {
        Ok(rho) => rho,
        Err(e) if !unique => {
            log::debug!("degenerate steady state could not be made physical: {e}");
            return Err(Error::NonUnique);
        }
        Err(e) => return Err(e),
    };
    let residual = vec_norm(&l.matrix().matvec(&vectorize(&rho)));
    let min_eigenvalue = herm_eig(&rho)?.values[0];
    if unique && residual > RESIDUAL_TOL * norm.max(f64::MIN_POSITIVE) {
        return Err(Error::Residual { residual, tolerance: RESIDUAL_TOL * norm });
    }
    Ok(SteadyStateReport {
        rho: DensityMatrix::new_unchecked(space.clone(), rho),
        residual,
        min_eigenvalue,
        unique,
    })
}

/// Unit trace, eigenvalues in [−CLAMP_TOL, 0) set to zero.
fn clean_state(rho: ComplexMatrix) -> Result<ComplexMatrix> {
    let tr = rho.trace().re;
    if !(tr.is_finite() && tr.abs() > f64::MIN_POSITIVE) {
        return Err(Error::NotUnitTrace { trace: tr });
    }
    let rho = rho.scale_real(1.0 / tr);
    let eig = herm_eig(&rho)?;
    let min = eig.values[0];
    if min >= 0.0 {
        return Ok(rho);
    }
    if min < -CLAMP_TOL {
        return Err(Error::NegativeEigenvalue { value: min });
    }
    let clamped: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0)).collect();
    let sum: f64 = clamped.iter().sum();
    let rebuilt = eig.vectors.conjugate_diag(&clamped).scale_real(1.0 / sum);
    Ok(rebuilt.hermitian_part())
}

/// One-step RK4 propagator for dv/dt = L v:
/// I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24.
fn rk4_propagator(l: &ComplexMatrix, h: f64) -> ComplexMatrix {
    let n = l.rows();
    let hl = l.scale_real(h);
    let mut out = ComplexMatrix::identity(n);
    let mut power = ComplexMatrix::identity(n);
    let mut factorial = 1.0;
    for k in 1..=4 {
        power = &power * &hl;
        factorial *= k as f64;
        out += &power.scale_real(1.0 / factorial);
    }
    out
}

fn trace_of(v: &[C64], d: usize) -> C64 {
    (0..d).map(|i| v[i + i * d]).sum()
}

/// Classical RK4 on vec(ρ) with fixed step ≤ `dt`, trace renormalized after
/// every propagator application.
///
/// Because the generator is linear and autonomous, n RK4 steps equal the
/// n-th power of the one-step propagator; the power is taken by repeated
/// squaring so long horizons cost O(log n) matrix products.
pub fn evolve(l: &Superoperator, rho0: &DensityMatrix, t_final: f64, dt: f64) -> Result<DensityMatrix> {
    let d = l.dim();
    if rho0.dim() != d {
        return Err(Error::Dimension("initial state dimension".into()));
    }
    if !(t_final >= 0.0 && t_final.is_finite() && dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_final = {t_final}, dt = {dt}")));
    }
    let guard = dt * l.norm();
    if guard > STABILITY_LIMIT * (1.0 + 1e-12) {
        return Err(Error::Stability { value: guard });
    }
    if t_final == 0.0 {
        return Ok(rho0.clone());
    }
    let steps = (t_final / dt - 1e-9).ceil().max(1.0) as u64;
    let h = t_final / steps as f64;

    let mut v = vectorize(rho0.matrix());
    let mut power = rk4_propagator(l.matrix(), h);
    let mut remaining = steps;
    let mut represented = 1u64;
    while remaining > 0 {
        if remaining & 1 == 1 {
            let before = trace_of(&v, d);
            v = power.matvec(&v);
            let after = trace_of(&v, d);
            let drift = (after - before).norm();
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            if drift > 1e-12 * represented as f64 * before.norm().max(1.0) {
                return Err(Error::TraceDrift { drift });
            }
            for z in v.iter_mut() {
                *z /= after;
            }
        }
        remaining >>= 1;
        if remaining > 0 {
            power = &power * &power;
            represented = represented.saturating_mul(2);
        }
    }
    let rho = unvectorize(&v, d).hermitian_part();
    if !rho.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(DensityMatrix::new_unchecked(rho0.space().clone(), rho))
}

/// Estimate of the slowest relaxation rate min |Re λ| over λ ≠ 0.
///
/// The RK4 propagator for a short step τ is restricted to the trace-zero
/// subspace (which it leaves invariant) and its spectral radius r is read
/// off from ‖A^{2^k}‖^{1/2^k} by repeated squaring; the rate is −ln r / τ.
/// Falls back to a conservative 1e-6·‖L‖ if no decay is detected.
pub fn spectral_gap(l: &Superoperator) -> f64 {
    let norm = l.norm();
    let fallback = 1e-6 * norm;
    if norm == 0.0 {
        return 0.0;
    }
    let d = l.dim();
    let n = d * d;
    let tau = 0.1 / norm;
    let m = rk4_propagator(l.matrix(), tau);

    // Π = I − vec(I) vec(I)† / d projects onto trace-zero matrices.
    let id = vec_identity(d);
    let mut proj = ComplexMatrix::identity(n);
    for (i, a) in id.iter().enumerate() {
        if a.re == 0.0 {
            continue;
        }
        for (j, b) in id.iter().enumerate() {
            proj[(i, j)] -= a * b.conj() / d as f64;
        }
    }
    let mut a = &m * &proj;
    let s0 = a.frobenius_norm();
    if s0 == 0.0 {
        return f64::INFINITY;
    }
    a = a.scale_real(1.0 / s0);
    let mut log_norm = s0.ln();
    let mut scale = 1.0f64;
    let mut estimate = log_norm;
    for _ in 0..64 {
        a = &a * &a;
        scale *= 2.0;
        let s = a.frobenius_norm();
        if s == 0.0 || !s.is_finite() {
            break;
        }
        a = a.scale_real(1.0 / s);
        log_norm = 2.0 * log_norm + s.ln();
        let next = log_norm / scale;
        let converged = (next - estimate).abs() <= 1e-12 * next.abs().max(1e-300);
        estimate = next;
        if converged {
            break;
        }
    }
    let gap = -estimate / tau;
    if gap.is_finite() && gap > 0.0 {
        gap
    } else {
        log::warn!("no spectral gap detected, using fallback {fallback:e}");
        fallback
    }
}

/// Evolves from `rho0` to t = 50/gap with dt = 0.1/‖L‖.
pub fn relax(l: &Superoperator, rho0: &DensityMatrix) -> Result<DensityMatrix> {
    let gap = spectral_gap(l);
    let dt = STABILITY_LIMIT / l.norm().max(f64::MIN_POSITIVE);
    evolve(l, rho0, 50.0 / gap, dt)
}

impl Model {
    pub fn steady_state(&self) -> Result<SteadyStateReport> {
        steady_state_on(&self.liouvillian()?, &self.space)
    }
}
