//! Liouvillian superoperators on column-stacked density matrices.
//!
//! `vec(ρ)` stacks columns, so `vec(ρ)[i + j·d] = ρ[i][j]` and
//! `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`. All superoperator formulas below follow
//! from that identity.
//!
//! Dissipators use the mixing-term convention
//! `F(ρ) = 2 L ρ R† − R† L ρ − ρ R† L` with the rate kept outside, so a
//! standard decay at rate κ is a term with weight κ/2.

use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, C64, ZERO};

/// Largest Hilbert dimension for which a dense d² x d² superoperator is built.
pub const MAX_DENSE_DIM: usize = 64;

/// Tolerance on |vec(I)† L| for trace preservation.
pub const TRACE_PRESERVATION_TOL: f64 = 1e-10;

pub fn vectorize(rho: &ComplexMatrix) -> Vec<C64> {
    let d = rho.rows();
    let mut v = Vec::with_capacity(d * rho.cols());
    for j in 0..rho.cols() {
        for i in 0..d {
            v.push(rho[(i, j)]);
        }
    }
    v
}

pub fn unvectorize(v: &[C64], d: usize) -> ComplexMatrix {
    assert_eq!(v.len(), d * d, "vector length is not d^2");
    let mut m = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        for i in 0..d {
            m[(i, j)] = v[i + j * d];
        }
    }
    m
}

/// `vec(I)` for a d-dimensional space.
pub fn vec_identity(d: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d * d];
    for i in 0..d {
        v[i + i * d] = C64::new(1.0, 0.0);
    }
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    dim: usize,
    mat: ComplexMatrix,
}

impl Superoperator {
    pub fn zero(dim: usize) -> Self {
        Self { dim, mat: ComplexMatrix::zeros(dim * dim, dim * dim) }
    }

    pub fn from_matrix(dim: usize, mat: ComplexMatrix) -> Result<Self> {
        if mat.rows() != dim * dim || !mat.is_square() {
            return Err(Error::Dimension(format!(
                "superoperator on dimension {dim} must be {0}x{0}",
                dim * dim
            )));
        }
        Ok(Self { dim, mat })
    }

    /// Hilbert-space dimension d.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Max absolute row sum, used for step-size guards and tolerances.
    pub fn norm(&self) -> f64 {
        self.mat.inf_norm()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { dim: self.dim, mat: self.mat.scale_real(c) }
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        unvectorize(&self.mat.matvec(&vectorize(rho)), self.dim)
    }

    /// max_j |(vec(I)† L)_j|
    pub fn trace_preservation_error(&self) -> f64 {
        let d = self.dim;
        let n = d * d;
        (0..n)
            .map(|col| (0..d).map(|i| self.mat[(i + i * d, col)]).sum::<C64>().norm())
            .fold(0.0, f64::max)
    }

    pub fn ensure_trace_preserving(&self) -> Result<()> {
        let deviation = self.trace_preservation_error();
        if deviation > TRACE_PRESERVATION_TOL * self.mat.max_abs().max(1.0) {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(())
    }

    /// Worst Hermiticity error of L(ρ) over the given Hermitian probes.
    pub fn hermiticity_preservation_error(&self, probes: &[ComplexMatrix]) -> f64 {
        probes
            .iter()
            .map(|p| self.apply(p).hermiticity_error())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Add for &Superoperator {
    type Output = Superoperator;

    fn add(self, rhs: &Superoperator) -> Superoperator {
        assert_eq!(self.dim, rhs.dim);
        Superoperator { dim: self.dim, mat: &self.mat + &rhs.mat }
    }
}

/// One mixing term `weight · (2 L ρ R† − R† L ρ − ρ R† L)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DissipatorTerm {
    pub left: ComplexMatrix,
    pub right: ComplexMatrix,
    pub weight: f64,
}

impl DissipatorTerm {
    pub fn new(left: ComplexMatrix, right: ComplexMatrix, weight: f64) -> Result<Self> {
        let term = Self { left, right, weight };
        term.validate()?;
        Ok(term)
    }

    /// Diagonal term with a single jump operator.
    pub fn decay(jump: ComplexMatrix, weight: f64) -> Result<Self> {
        Self::new(jump.clone(), jump, weight)
    }

    pub fn is_diagonal(&self) -> bool {
        self.left == self.right
    }

    pub fn validate(&self) -> Result<()> {
        if !self.left.is_square()
            || !self.right.is_square()
            || self.left.rows() != self.right.rows()
        {
            return Err(Error::Dimension(format!(
                "jump operators {}x{} and {}x{}",
                self.left.rows(),
                self.left.cols(),
                self.right.rows(),
                self.right.cols()
            )));
        }
        if !self.weight.is_finite() {
            return Err(Error::InvalidParameter(format!("weight {}", self.weight)));
        }
        if self.is_diagonal() && self.weight < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "diagonal dissipator weight {} is negative",
                self.weight
            )));
        }
        Ok(())
    }

    /// Applies the term directly to a matrix (no vectorization).
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let rd = self.right.adjoint();
        let rdl = &rd * &self.left;
        let jump = &(&self.left * rho) * &rd;
        let mut out = jump.scale_real(2.0);
        out = &out - &(&rdl * rho);
        out = &out - &(rho * &rdl);
        out.scale_real(self.weight)
    }
}

fn guard_dim(d: usize) -> Result<()> {
    if d > MAX_DENSE_DIM {
        return Err(Error::DimensionGuard { dim: d, limit: MAX_DENSE_DIM });
    }
    Ok(())
}

/// ρ ↦ −i[h, ρ]
pub fn commutator_super(h: &ComplexMatrix) -> Result<Superoperator> {
    h.ensure_hermitian(1e-10 * h.max_abs().max(1.0))?;
    let d = h.rows();
    guard_dim(d)?;
    let id = ComplexMatrix::identity(d);
    let mat = &kron(&id, h) - &kron(&h.transpose(), &id);
    Ok(Superoperator { dim: d, mat: mat.scale(-C64::i()) })
}

pub fn dissipator_super(term: &DissipatorTerm) -> Result<Superoperator> {
    term.validate()?;
    let d = term.left.rows();
    guard_dim(d)?;
    let id = ComplexMatrix::identity(d);
    let rdl = &term.right.adjoint() * &term.left;
    // vec(L ρ R†) = (R̄ ⊗ L) vec(ρ)
    let mut mat = kron(&term.right.conj(), &term.left).scale_real(2.0);
    mat = &mat - &kron(&id, &rdl);
    mat = &mat - &kron(&rdl.transpose(), &id);
    Ok(Superoperator { dim: d, mat: mat.scale_real(term.weight) })
}

/// `commutator_super(h) + Σ dissipator_super(term)`, checked for trace
/// preservation.
pub fn assemble(h: &ComplexMatrix, terms: &[DissipatorTerm]) -> Result<Superoperator> {
    let l = assemble_unchecked(h, terms)?;
    l.ensure_trace_preserving()?;
    Ok(l)
}

pub(crate) fn assemble_unchecked(
    h: &ComplexMatrix,
    terms: &[DissipatorTerm],
) -> Result<Superoperator> {
    let mut l = commutator_super(h)?;
    for term in terms {
        if term.left.rows() != l.dim {
            return Err(Error::Dimension(format!(
                "dissipator on dimension {} with Hamiltonian on {}",
                term.left.rows(),
                l.dim
            )));
        }
        l.mat += &dissipator_super(term)?.mat;
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{embed, herm_eig, lowering, HilbertSpace};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn vec_roundtrip_is_column_major() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(vectorize(&m), vec![c(1.0), c(3.0), c(2.0), c(4.0)]);
        assert_eq!(unvectorize(&vectorize(&m), 2), m);
    }

    #[test]
    fn zero_hamiltonian() {
        let l = commutator_super(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(l, Superoperator::zero(3));
    }

    #[test]
    fn phase_rotation_of_coherence() {
        let omega = 1.7;
        let h = ComplexMatrix::from_real_diag(&[0.0, omega]);
        let l = commutator_super(&h).unwrap();
        let mut coh = ComplexMatrix::zeros(2, 2);
        coh[(0, 1)] = c(1.0);
        let out = l.apply(&coh);
        assert!((out[(0, 1)] - C64::new(0.0, omega)).norm() < 1e-15);
        assert_eq!(out[(1, 0)], ZERO);
    }

    #[test]
    fn rejects_non_hermitian_hamiltonian() {
        assert!(matches!(commutator_super(&lowering()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn qubit_decay_rate() {
        let kappa = 0.8;
        let term = DissipatorTerm::decay(lowering(), kappa / 2.0).unwrap();
        let l = dissipator_super(&term).unwrap();
        let excited = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        let drho = l.apply(&excited);
        assert!((drho[(1, 1)] - c(-kappa)).norm() < 1e-15);
        assert!((drho[(0, 0)] - c(kappa)).norm() < 1e-15);
    }

    #[test]
    fn zero_jump_is_zero() {
        let z = ComplexMatrix::zeros(2, 2);
        let l = dissipator_super(&DissipatorTerm::decay(z, 3.0).unwrap()).unwrap();
        assert_eq!(l, Superoperator::zero(2));
    }

    #[test]
    fn single_qubit_decay_matrix_and_spectrum() {
        // Hand-derived 4x4 Liouvillian for weight κ/2 decay, vec order
        // (ρ00, ρ10, ρ01, ρ11): dρ00 = κρ11, dρ10 = -κ/2 ρ10,
        // dρ01 = -κ/2 ρ01, dρ11 = -κρ11.
        let kappa = 2.0;
        let l = assemble(
            &ComplexMatrix::zeros(2, 2),
            &[DissipatorTerm::decay(lowering(), kappa / 2.0).unwrap()],
        )
        .unwrap();
        let expected = ComplexMatrix::from_real(
            4,
            4,
            &[
                0.0, 0.0, 0.0, kappa, //
                0.0, -kappa / 2.0, 0.0, 0.0, //
                0.0, 0.0, -kappa / 2.0, 0.0, //
                0.0, 0.0, 0.0, -kappa,
            ],
        )
        .unwrap();
        assert!(l.matrix().max_abs_diff(&expected) < 1e-15);
        // upper triangular: eigenvalues are the diagonal
        let mut diag: Vec<f64> = l.matrix().diag().iter().map(|z| z.re).collect();
        diag.sort_by(f64::total_cmp);
        assert_eq!(diag, vec![-kappa, -kappa / 2.0, -kappa / 2.0, 0.0]);
    }

    #[test]
    fn cross_terms_need_their_partner() {
        let space = HilbertSpace::qubits(2);
        let p1 = embed(&lowering(), 0, &space).unwrap();
        let p2 = embed(&lowering(), 1, &space).unwrap();
        let h = ComplexMatrix::zeros(4, 4);
        // F_{1,2} alone keeps the trace but breaks hermiticity
        let lone = DissipatorTerm::new(p1.clone(), p2.clone(), 1.0).unwrap();
        let l = assemble(&h, &[lone.clone()]).unwrap();
        let probe = ComplexMatrix::from_vec(4, 4, vec![C64::new(0.25, 0.0); 16]).unwrap();
        assert!(l.hermiticity_preservation_error(&[probe.clone()]) > 1e-3);
        let pair = [lone, DissipatorTerm::new(p2, p1, 1.0).unwrap()];
        let l = assemble(&h, &pair).unwrap();
        assert!(l.hermiticity_preservation_error(&[probe]) < 1e-15);
    }

    #[test]
    fn negative_diagonal_weight_rejected() {
        assert!(DissipatorTerm::decay(lowering(), -1.0).is_err());
    }

    #[test]
    fn dimension_guard() {
        let h = ComplexMatrix::zeros(MAX_DENSE_DIM + 1, MAX_DENSE_DIM + 1);
        assert!(matches!(commutator_super(&h), Err(Error::DimensionGuard { .. })));
    }

    #[test]
    fn hermitian_generator_spectrum_is_imaginary() {
        let h = ComplexMatrix::from_real(2, 2, &[0.3, 1.0, 1.0, -0.3]).unwrap();
        let l = commutator_super(&h).unwrap();
        // i·L is Hermitian for a pure commutator
        let il = l.matrix().scale(C64::i());
        assert!(herm_eig(&il).is_ok());
    }
}
