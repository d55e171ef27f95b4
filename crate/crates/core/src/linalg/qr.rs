//! Householder QR with column pivoting and the least-squares solve built on it.

use super::matrix::{vec_norm, ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Relative diagonal threshold below which the factorization is treated as
/// rank deficient.
pub const RANK_TOL: f64 = 1e-12;

/// Pivoted QR factorization `A P = Q R` of an m x n matrix with m >= n.
pub struct ColPivQr {
    m: usize,
    n: usize,
    /// R in the upper triangle; below-diagonal storage unused.
    r: ComplexMatrix,
    /// Householder vectors, `reflectors[k]` acts on rows k..m.
    reflectors: Vec<Vec<C64>>,
    betas: Vec<f64>,
    /// Column `k` of `A P` is column `perm[k]` of `A`.
    perm: Vec<usize>,
}

impl ColPivQr {
    pub fn factor(a: &ComplexMatrix) -> Result<Self> {
        let (m, n) = (a.rows(), a.cols());
        if m < n {
            return Err(Error::Dimension(format!("least squares needs rows >= cols, got {m}x{n}")));
        }
        // Work column-major for cache-friendly reflector application.
        let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.col(j)).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut reflectors = Vec::with_capacity(n);
        let mut betas = Vec::with_capacity(n);

        for k in 0..n {
            let (best, _) = (k..n)
                .map(|j| (j, cols[j][k..].iter().map(|z| z.norm_sqr()).sum::<f64>()))
                .fold((k, -1.0), |acc, (j, s)| if s > acc.1 { (j, s) } else { acc });
            cols.swap(k, best);
            perm.swap(k, best);

            let x = &cols[k][k..];
            let norm = vec_norm(x);
            let mut v: Vec<C64> = x.to_vec();
            let beta;
            if norm == 0.0 {
                beta = 0.0;
            } else {
                let x0 = x[0];
                let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
                let alpha = -phase * norm;
                v[0] -= alpha;
                let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                beta = if vnorm2 == 0.0 { 0.0 } else { 2.0 / vnorm2 };
            }
            for col in cols.iter_mut().skip(k) {
                apply_reflector(&v, beta, &mut col[k..]);
            }
            reflectors.push(v);
            betas.push(beta);
        }

        let mut r = ComplexMatrix::zeros(n, n);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..=j {
                r[(i, j)] = col[i];
            }
        }
        Ok(Self { m, n, r, reflectors, betas, perm })
    }

    /// |R_kk| in pivot order (non-increasing up to roundoff).
    pub fn r_diag_abs(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.r[(k, k)].norm()).collect()
    }

    /// min |R_kk| / max |R_kk|.
    pub fn rank_ratio(&self) -> f64 {
        let d = self.r_diag_abs();
        let max = d.iter().copied().fold(0.0, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        d.iter().copied().fold(f64::INFINITY, f64::min) / max
    }

    /// Numerical rank under relative threshold `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        let d = self.r_diag_abs();
        let max = d.first().copied().unwrap_or(0.0);
        d.iter().take_while(|&&x| x > tol * max).count()
    }

    /// `Q^H b`
    pub fn apply_qh(&self, b: &[C64]) -> Vec<C64> {
        assert_eq!(b.len(), self.m);
        let mut y = b.to_vec();
        for (k, (v, &beta)) in self.reflectors.iter().zip(&self.betas).enumerate() {
            apply_reflector(v, beta, &mut y[k..]);
        }
        y
    }

    /// Basic least-squares solution using the leading `rank` columns of R.
    pub fn solve_basic(&self, b: &[C64], rank: usize) -> Vec<C64> {
        let y = self.apply_qh(b);
        let mut z = vec![ZERO; self.n];
        for i in (0..rank).rev() {
            let mut acc = y[i];
            for j in i + 1..rank {
                acc -= self.r[(i, j)] * z[j];
            }
            z[i] = acc / self.r[(i, i)];
        }
        let mut x = vec![ZERO; self.n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        x
    }
}

fn apply_reflector(v: &[C64], beta: f64, x: &mut [C64]) {
    if beta == 0.0 {
        return;
    }
    let dot: C64 = v.iter().zip(x.iter()).map(|(vi, xi)| vi.conj() * xi).sum();
    let s = dot * beta;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= vi * s;
    }
}

#[derive(Clone, Debug)]
pub struct LstsqSolution {
    pub x: Vec<C64>,
    /// ‖m·x − b‖₂
    pub residual: f64,
}

/// Minimizes ‖m·x − b‖₂ for a full-column-rank `m` with rows >= cols.
pub fn lstsq_solve(m: &ComplexMatrix, b: &[C64]) -> Result<LstsqSolution> {
    if b.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "rhs length {} for {} rows",
            b.len(),
            m.rows()
        )));
    }
    let qr = ColPivQr::factor(m)?;
    let ratio = qr.rank_ratio();
    if ratio <= RANK_TOL {
        return Err(Error::RankDeficient { ratio });
    }
    let x = qr.solve_basic(b, m.cols());
    let r: Vec<C64> = m.matvec(&x).iter().zip(b).map(|(a, b)| a - b).collect();
    Ok(LstsqSolution { x, residual: vec_norm(&r) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_returns_rhs() {
        let b = vec![C64::new(1.0, 2.0), C64::new(-3.0, 0.5), C64::new(0.0, 0.0)];
        let sol = lstsq_solve(&ComplexMatrix::identity(3), &b).unwrap();
        for (x, y) in sol.x.iter().zip(&b) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn overdetermined_consistent() {
        let m = ComplexMatrix::from_real(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        let b: Vec<C64> = [2.0, 3.0, 5.0].iter().map(|&x| C64::new(x, 0.0)).collect();
        let sol = lstsq_solve(&m, &b).unwrap();
        assert!((sol.x[0] - C64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((sol.x[1] - C64::new(3.0, 0.0)).norm() < 1e-12);
        assert!(sol.residual <= 1e-12);
    }

    #[test]
    fn rank_deficient_detected() {
        let m = ComplexMatrix::from_real(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]).unwrap();
        let b = vec![C64::new(1.0, 0.0); 3];
        assert!(matches!(lstsq_solve(&m, &b), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn underdetermined_rejected() {
        let m = ComplexMatrix::zeros(1, 2);
        assert!(matches!(lstsq_solve(&m, &[ZERO]), Err(Error::Dimension(_))));
    }
}
