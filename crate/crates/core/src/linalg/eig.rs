//! Hermitian eigendecomposition by cyclic Jacobi rotations.

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Tolerance on max |A - A^H| accepted as Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

#[derive(Clone, Debug)]
pub struct HermEig {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.vectors.conjugate_diag(&self.values)
    }
}

/// Eigenvalues (ascending) and an orthonormal eigenbasis of a Hermitian
/// matrix.
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermEig> {
    a.ensure_hermitian(HERMITIAN_TOL * a.max_abs().max(1.0))?;
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let scale = m.frobenius_norm();
    if scale == 0.0 {
        return Ok(HermEig { values: vec![0.0; n], vectors: v });
    }

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m[(i, i)].re, i)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut vectors = ComplexMatrix::zeros(n, n);
    for (k, &(_, src)) in pairs.iter().enumerate() {
        for i in 0..n {
            vectors[(i, k)] = v[(i, src)];
        }
    }
    Ok(HermEig { values: pairs.into_iter().map(|(x, _)| x).collect(), vectors })
}

/// One Jacobi rotation annihilating `m[p][q]`; accumulates into `v`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Skip rotations that would not change anything at working precision.
    if mag < 1e-300 || (app.abs() + aqq.abs()) * f64::EPSILON * 1e-3 > mag {
        m[(p, q)] = ZERO;
        m[(q, p)] = ZERO;
        return;
    }
    let phase = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Unitary J acting on the (p, q) plane.
    let j_pp = C64::new(c, 0.0);
    let j_pq = C64::new(s, 0.0);
    let j_qp = -phase.conj() * s;
    let j_qq = phase.conj() * c;

    let n = m.rows();
    // m <- m J
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * j_pp + akq * j_qp;
        m[(k, q)] = akp * j_pq + akq * j_qq;
    }
    // m <- J^H m
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        m[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
    // v <- v J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Hermitian PSD square root. Eigenvalues in `[-1e-10, 0)` are clamped to
/// zero; anything more negative is an error.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    if let Some(&min) = eig.values.first() {
        if min < -1e-10 {
            return Err(Error::NegativeEigenvalue { value: min });
        }
    }
    let roots: Vec<f64> = eig.values.iter().map(|&x| x.max(0.0).sqrt()).collect();
    Ok(eig.vectors.conjugate_diag(&roots))
}
