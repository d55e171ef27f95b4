use crate::error::{Error, Result};
use crate::liouvillian::{assemble, DissipatorTerm, Superoperator};
use crate::linalg::{annihilation, embed, lowering, ComplexMatrix, HilbertSpace, C64};

use super::params::{EffectiveParams, Geometry, MicroParams};

/// Hard limit on the Hilbert dimension of microscopic models.
pub const MAX_MICRO_DIM: usize = 300;

/// A Hamiltonian plus dissipator list on a tensor space.
#[derive(Clone, Debug)]
pub struct Model {
    pub space: HilbertSpace,
    pub hamiltonian: ComplexMatrix,
    pub terms: Vec<DissipatorTerm>,
    /// Factor indices carrying polaritons, in site order.
    pub polariton_factors: Vec<usize>,
}

impl Model {
    pub fn liouvillian(&self) -> Result<Superoperator> {
        assemble(&self.hamiltonian, &self.terms)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

fn site_ops(space: &HilbertSpace, factors: &[usize]) -> Result<Vec<ComplexMatrix>> {
    factors.iter().map(|&f| embed(&lowering(), f, space)).collect()
}

/// Adds `op + op†` to `h`.
fn add_with_hc(h: &mut ComplexMatrix, op: &ComplexMatrix) {
    *h += op;
    *h += &op.adjoint();
}

fn cross_pair(
    terms: &mut Vec<DissipatorTerm>,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    weight: f64,
) -> Result<()> {
    terms.push(DissipatorTerm::new(a.clone(), b.clone(), weight)?);
    terms.push(DissipatorTerm::new(b.clone(), a.clone(), weight)?);
    Ok(())
}

/// Three polaritons on a ring of three driven guides.
///
/// H = Σᵢ [Γᵢyᵢ Pᵢ†P_{i+1} + Γᵢxᵢ (Pᵢ† + P_{i+1}†)] + h.c. (indices cyclic),
/// diagonal weights Γ_{i−1}z_{i−1} + Γᵢzᵢ, cross weights Γᵢ on
/// F_{i,i+1} and F_{i+1,i}. Polariton detunings are assumed compensated by
/// the guide-induced shifts.
pub fn build_ring3_effective(p: &EffectiveParams) -> Result<Model> {
    p.check_lengths(3, 3)?;
    if p.n_p != 0.0 {
        return Err(Error::InvalidParameter("n_p is only used by pair_thermal".into()));
    }
    let space = HilbertSpace::qubits(3);
    let ops = site_ops(&space, &[0, 1, 2])?;
    let d = space.dim();

    let mut h = ComplexMatrix::zeros(d, d);
    for i in 0..3 {
        let next = (i + 1) % 3;
        let g = p.gamma[i];
        let hop = (&ops[i].adjoint() * &ops[next]).scale_real(g * p.y[i]);
        let drive = (&ops[i].adjoint() + &ops[next].adjoint()).scale(p.x[i] * g);
        add_with_hc(&mut h, &hop);
        add_with_hc(&mut h, &drive);
    }

    let mut terms = Vec::with_capacity(9);
    for i in 0..3 {
        let prev = (i + 2) % 3;
        let w = p.gamma[prev] * p.z[prev] + p.gamma[i] * p.z[i];
        terms.push(DissipatorTerm::decay(ops[i].clone(), w)?);
    }
    for i in 0..3 {
        cross_pair(&mut terms, &ops[i], &ops[(i + 1) % 3], p.gamma[i])?;
    }
    Ok(Model { space, hamiltonian: h, terms, polariton_factors: vec![0, 1, 2] })
}

/// Two polaritons between three driven guides (the outer guides each touch
/// one site, the middle guide both).
///
/// H′ = Γ₂y₂P₁†P₂ + (Γ₁x₁+Γ₂x₂)P₁† + (Γ₂x₂+Γ₃x₃)P₂† + h.c.,
/// diagonal weights Γ₂z₂+Γ₁ and Γ₂z₂+Γ₃, cross weight Γ₂.
pub fn build_pair_effective(p: &EffectiveParams) -> Result<Model> {
    p.check_lengths(2, 3)?;
    if p.n_p != 0.0 {
        return Err(Error::InvalidParameter("n_p is only used by pair_thermal".into()));
    }
    let space = HilbertSpace::qubits(2);
    let ops = site_ops(&space, &[0, 1])?;
    let g = &p.gamma;
    let d = space.dim();

    let mut h = ComplexMatrix::zeros(d, d);
    add_with_hc(&mut h, &(&ops[0].adjoint() * &ops[1]).scale_real(g[1] * p.y[1]));
    add_with_hc(&mut h, &ops[0].adjoint().scale(p.x[0] * g[0] + p.x[1] * g[1]));
    add_with_hc(&mut h, &ops[1].adjoint().scale(p.x[1] * g[1] + p.x[2] * g[2]));

    let mut terms = vec![
        DissipatorTerm::decay(ops[0].clone(), g[1] * p.z[1] + g[0])?,
        DissipatorTerm::decay(ops[1].clone(), g[1] * p.z[1] + g[2])?,
    ];
    cross_pair(&mut terms, &ops[0], &ops[1], g[1])?;
    Ok(Model { space, hamiltonian: h, terms, polariton_factors: vec![0, 1] })
}

/// Two polaritons on one driven guide with a thermal polariton reservoir.
///
/// Zero-temperature part: H = Γy(P₁†P₂ + h.c.) + Γ(x P₁† + x P₂† + h.c.),
/// diagonal weight Γz, cross weight Γ. The local polariton channel
/// γ_loc = Γ(z−1) is then split into emission γ_loc(n_p+1) on Pᵢ and
/// absorption γ_loc·n_p on Pᵢ†.
pub fn build_pair_thermal(p: &EffectiveParams) -> Result<Model> {
    p.check_lengths(2, 1)?;
    let space = HilbertSpace::qubits(2);
    let ops = site_ops(&space, &[0, 1])?;
    let (g, x, y, z) = (p.gamma[0], p.x[0], p.y[0], p.z[0]);
    let d = space.dim();

    let mut h = ComplexMatrix::zeros(d, d);
    add_with_hc(&mut h, &(&ops[0].adjoint() * &ops[1]).scale_real(g * y));
    add_with_hc(&mut h, &(&ops[0].adjoint() + &ops[1].adjoint()).scale(x * g));

    let local = g * (z - 1.0);
    let mut terms = Vec::with_capacity(6);
    for op in &ops {
        terms.push(DissipatorTerm::decay(op.clone(), g + local * (p.n_p + 1.0))?);
    }
    for op in &ops {
        terms.push(DissipatorTerm::decay(op.adjoint(), local * p.n_p)?);
    }
    cross_pair(&mut terms, &ops[0], &ops[1], g)?;
    Ok(Model { space, hamiltonian: h, terms, polariton_factors: vec![0, 1] })
}

/// Layout of factors for each geometry: (factor dims, polariton factors,
/// guide factors, sites coupled by each guide).
fn micro_layout(geometry: Geometry, nb: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>, Vec<Vec<usize>>) {
    match geometry {
        Geometry::Ring => (
            vec![2, nb, 2, nb, 2, nb],
            vec![0, 2, 4],
            vec![1, 3, 5],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        ),
        Geometry::SingleGuide => (vec![2, nb, 2], vec![0, 2], vec![1], vec![vec![0, 1]]),
        Geometry::ThreeGuide => (
            vec![nb, 2, nb, 2, nb],
            vec![1, 3],
            vec![0, 2, 4],
            vec![vec![0], vec![0, 1], vec![1]],
        ),
    }
}

/// Full polariton + waveguide model in the frame rotating at the drive
/// frequency, with guide modes truncated at `n_boson` Fock levels.
///
/// Dissipators use weight κ/2 per guide and γ/2 per polariton, multiplied
/// by (n+1) for emission and n for absorption at finite temperature.
pub fn build_full_micro(p: &MicroParams) -> Result<Model> {
    let geometry = p.validate()?;
    let nb = p.n_boson;
    let (dims, pol, guides, coupled) = micro_layout(geometry, nb);
    let dim: usize = dims.iter().product();
    if dim > MAX_MICRO_DIM {
        return Err(Error::DimensionGuard { dim, limit: MAX_MICRO_DIM });
    }
    let space = HilbertSpace::new(dims)?;
    let sites = site_ops(&space, &pol)?;
    let modes: Vec<ComplexMatrix> = guides
        .iter()
        .map(|&f| embed(&annihilation(nb), f, &space))
        .collect::<Result<_>>()?;
    let d = space.dim();

    let mut h = ComplexMatrix::zeros(d, d);
    for (g, a) in modes.iter().enumerate() {
        let ad = a.adjoint();
        h += &(&ad * a).scale_real(p.omega_c[g] - p.omega_d);
        for &s in &coupled[g] {
            add_with_hc(&mut h, &(&ad * &sites[s]).scale_real(p.j[g]));
        }
        add_with_hc(&mut h, &ad.scale(C64::from_polar(p.alpha[g], p.phi[g])));
    }
    for (s, op) in sites.iter().enumerate() {
        h += &(&op.adjoint() * op).scale_real(p.omega_p[s] - p.omega_d);
    }

    let mut terms = Vec::new();
    for a in &modes {
        terms.push(DissipatorTerm::decay(a.clone(), p.kappa * (p.n_c + 1.0) / 2.0)?);
        if p.n_c > 0.0 {
            terms.push(DissipatorTerm::decay(a.adjoint(), p.kappa * p.n_c / 2.0)?);
        }
    }
    for op in &sites {
        terms.push(DissipatorTerm::decay(op.clone(), p.gamma_p * (p.n_p + 1.0) / 2.0)?);
        if p.n_p > 0.0 {
            terms.push(DissipatorTerm::decay(op.adjoint(), p.gamma_p * p.n_p / 2.0)?);
        }
    }
    Ok(Model { space, hamiltonian: h, terms, polariton_factors: pol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;

    fn ring_params() -> EffectiveParams {
        EffectiveParams {
            n_sites: 3,
            gamma: vec![1.0, 0.3, 0.7],
            x: vec![C64::new(0.4, 0.2), C64::new(-0.1, 0.0), C64::new(0.0, 1.1)],
            y: vec![0.5, -2.0, 1.5],
            z: vec![1.01, 11.0, 1.2],
            n_p: 0.0,
        }
    }

    #[test]
    fn ring_total_decay_weight() {
        let p = ring_params();
        let gamma_p = 0.04;
        // choose z consistently with a common γ
        let mut q = p.clone();
        for i in 0..3 {
            q.z[i] = 1.0 + gamma_p / (4.0 * q.gamma[i]);
        }
        let m = build_ring3_effective(&q).unwrap();
        for i in 0..3 {
            let prev = (i + 2) % 3;
            let expected = q.gamma[prev] + q.gamma[i] + gamma_p / 2.0;
            assert!((m.terms[i].weight - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn hamiltonians_hermitian_and_trace_preserving() {
        let ring = build_ring3_effective(&ring_params()).unwrap();
        let pair = build_pair_effective(&EffectiveParams {
            n_sites: 2,
            gamma: vec![1.0, 76.0, 1.0],
            x: vec![C64::new(3.0, 4.0), C64::new(0.2, -0.3), C64::new(-5.0, 0.0)],
            y: vec![0.0, 0.7, 0.0],
            z: vec![1.5, 1.01, 1.5],
            n_p: 0.0,
        })
        .unwrap();
        let thermal = build_pair_thermal(&EffectiveParams {
            n_sites: 2,
            gamma: vec![1.0],
            x: vec![C64::new(2.0, 0.0)],
            y: vec![15.0],
            z: vec![1.01],
            n_p: 0.3,
        })
        .unwrap();
        for m in [ring, pair, thermal] {
            assert!(m.hamiltonian.hermiticity_error() < 1e-12);
            m.liouvillian().unwrap();
        }
    }

    #[test]
    fn length_mismatch_rejected() {
        let mut p = ring_params();
        p.x.pop();
        assert!(matches!(build_ring3_effective(&p), Err(Error::InvalidParameter(_))));
        let mut t = ring_params();
        t.n_sites = 2;
        assert!(build_pair_thermal(&t).is_err());
    }

    #[test]
    fn negative_occupation_rejected() {
        let p = EffectiveParams {
            n_sites: 2,
            gamma: vec![1.0],
            x: vec![ZERO],
            y: vec![0.0],
            z: vec![1.01],
            n_p: -0.1,
        };
        assert!(build_pair_thermal(&p).is_err());
    }

    #[test]
    fn micro_dimension_and_guard() {
        let mut p = MicroParams {
            n_sites: 2,
            j: vec![0.05],
            kappa: 1.0,
            gamma_p: 0.002,
            alpha: vec![0.025],
            phi: vec![0.0],
            omega_c: vec![0.0],
            omega_p: vec![0.0, 0.0],
            omega_d: 0.0,
            n_boson: 3,
            n_c: 0.0,
            n_p: 0.0,
        };
        let m = build_full_micro(&p).unwrap();
        assert_eq!(m.space.factor_dims(), &[2, 3, 2]);
        assert!(m.hamiltonian.hermiticity_error() < 1e-12);
        m.liouvillian().unwrap();

        p.n_sites = 3;
        p.j = vec![0.05; 3];
        p.alpha = vec![0.0; 3];
        p.phi = vec![0.0; 3];
        p.omega_c = vec![0.0; 3];
        p.omega_p = vec![0.0; 3];
        p.n_boson = 3;
        assert_eq!(build_full_micro(&p).unwrap().dim(), 216);
        p.n_boson = 4;
        assert!(matches!(build_full_micro(&p), Err(Error::DimensionGuard { .. })));
    }
}
