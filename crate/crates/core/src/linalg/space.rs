use serde::{Deserialize, Serialize};

use super::eig::herm_eig;
use super::matrix::{kron, ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Tensor-product structure: local dimensions of each factor, in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSpace {
    factor_dims: Vec<usize>,
}

impl HilbertSpace {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() || factor_dims.contains(&0) {
            return Err(Error::Dimension(format!("invalid factor dims {factor_dims:?}")));
        }
        Ok(Self { factor_dims })
    }

    pub fn qubits(n: usize) -> Self {
        Self { factor_dims: vec![2; n] }
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn n_factors(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    /// Row-major strides: the flat index is Σ digit_k · stride_k.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.factor_dims.len()];
        for k in (0..self.factor_dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.factor_dims[k + 1];
        }
        strides
    }

    pub fn subspace(&self, keep: &[usize]) -> Self {
        Self { factor_dims: keep.iter().map(|&k| self.factor_dims[k]).collect() }
    }
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` on factor `site`.
pub fn embed(op: &ComplexMatrix, site: usize, space: &HilbertSpace) -> Result<ComplexMatrix> {
    let n = space.n_factors();
    if site >= n {
        return Err(Error::SiteOutOfRange { site, n_factors: n });
    }
    let local = space.factor_dims[site];
    if !op.is_square() || op.rows() != local {
        return Err(Error::Dimension(format!(
            "operator is {}x{}, factor {site} has dimension {local}",
            op.rows(),
            op.cols()
        )));
    }
    let left: usize = space.factor_dims[..site].iter().product();
    let right: usize = space.factor_dims[site + 1..].iter().product();
    let mut out = op.clone();
    if left > 1 {
        out = kron(&ComplexMatrix::identity(left), &out);
    }
    if right > 1 {
        out = kron(&out, &ComplexMatrix::identity(right));
    }
    Ok(out)
}

/// Hermitian, unit-trace, positive semidefinite matrix on a tensor space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    space: HilbertSpace,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub const HERMITIAN_TOL: f64 = 1e-10;
    pub const TRACE_TOL: f64 = 1e-10;
    pub const PSD_TOL: f64 = 1e-8;

    pub fn new(space: HilbertSpace, mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() || mat.rows() != space.dim() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for a space of dimension {}",
                mat.rows(),
                mat.cols(),
                space.dim()
            )));
        }
        mat.ensure_hermitian(Self::HERMITIAN_TOL)?;
        let trace = mat.trace().re;
        if (trace - 1.0).abs() > Self::TRACE_TOL {
            return Err(Error::NotUnitTrace { trace });
        }
        let min = herm_eig(&mat)?.values[0];
        if min < -Self::PSD_TOL {
            return Err(Error::NegativeEigenvalue { value: min });
        }
        Ok(Self { space, mat })
    }

    /// Skips validation; callers must already guarantee the invariants.
    pub(crate) fn new_unchecked(space: HilbertSpace, mat: ComplexMatrix) -> Self {
        debug_assert_eq!(mat.rows(), space.dim());
        Self { space, mat }
    }

    /// |ψ⟩⟨ψ| after normalizing ψ.
    pub fn pure(space: HilbertSpace, psi: &[C64]) -> Result<Self> {
        if psi.len() != space.dim() {
            return Err(Error::Dimension("state vector length".into()));
        }
        let norm = super::matrix::vec_norm(psi);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter("state vector has zero norm".into()));
        }
        let psi: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        let col = ComplexMatrix::column(&psi);
        let mat = &col * &col.adjoint();
        Self::new(space, mat.hermitian_part())
    }

    /// Computational basis state with flat index `index`.
    pub fn basis(space: HilbertSpace, index: usize) -> Result<Self> {
        let mut psi = vec![ZERO; space.dim()];
        *psi.get_mut(index).ok_or_else(|| Error::Dimension("basis index".into()))? =
            C64::new(1.0, 0.0);
        Self::pure(space, &psi)
    }

    pub fn maximally_mixed(space: HilbertSpace) -> Self {
        let d = space.dim();
        let mat = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
        Self { space, mat }
    }

    pub fn from_diag(space: HilbertSpace, probs: &[f64]) -> Result<Self> {
        Self::new(space, ComplexMatrix::from_real_diag(probs))
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn purity(&self) -> f64 {
        // tr ρ² = Σ |ρ_ij|² for Hermitian ρ
        self.mat.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Diagonal in the computational basis.
    pub fn populations(&self) -> Vec<f64> {
        self.mat.diag().iter().map(|z| z.re).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        herm_eig(&self.mat).map(|e| e.values[0]).unwrap_or(f64::NAN)
    }
}

/// Reduced state on the factors in `keep` (kept in original order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let space = rho.space();
    let n = space.n_factors();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&k| k >= n) {
        return Err(Error::SiteOutOfRange { site: bad, n_factors: n });
    }
    let traced: Vec<usize> = (0..n).filter(|k| !kept.contains(k)).collect();
    let dims = space.factor_dims();
    let strides = space.strides();

    let offsets = |factors: &[usize]| -> Vec<usize> {
        // Flat offsets for every multi-index over `factors`, row-major.
        let mut offs = vec![0usize];
        for &f in factors {
            let mut next = Vec::with_capacity(offs.len() * dims[f]);
            for &o in &offs {
                for d in 0..dims[f] {
                    next.push(o + d * strides[f]);
                }
            }
            offs = next;
        }
        offs
    };
    let keep_offs = offsets(&kept);
    let trace_offs = offsets(&traced);

    let dk = keep_offs.len();
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for (i, &ki) in keep_offs.iter().enumerate() {
        for (j, &kj) in keep_offs.iter().enumerate() {
            out[(i, j)] = trace_offs.iter().map(|&t| m[(ki + t, kj + t)]).sum();
        }
    }
    Ok(DensityMatrix::new_unchecked(space.subspace(&kept), out))
}
