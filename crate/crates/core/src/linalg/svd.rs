//! Singular values by one-sided (Hestenes) Jacobi rotations.

use super::matrix::{ComplexMatrix, C64};

const MAX_SWEEPS: usize = 64;

/// Singular values in decreasing order, accurate to about eps·‖A‖ even
/// for the smallest ones (no squaring of the matrix).
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let (m, n) = (a.rows(), a.cols());
    // columns of `a` as contiguous vectors
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let x = cols[p][i];
                    let y = cols[q][i] * phase;
                    cols[p][i] = x * c - y * s;
                    cols[q][i] = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_rank_one() {
        let d = ComplexMatrix::from_real_diag(&[3.0, -1.0, 2.0]);
        assert_eq!(singular_values(&d), vec![3.0, 2.0, 1.0]);
        let u = [C64::new(1.0, 1.0), C64::new(0.0, 2.0)];
        let mut r = ComplexMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                r[(i, j)] = u[i] * u[j].conj();
            }
        }
        let sv = singular_values(&r);
        assert!((sv[0] - 6.0).abs() < 1e-14);
        assert!(sv[1] < 1e-15);
    }

    #[test]
    fn matches_eigenvalues_of_gram() {
        let a = ComplexMatrix::from_vec(
            3,
            2,
            vec![
                C64::new(1.0, 0.5),
                C64::new(-0.3, 0.0),
                C64::new(0.2, -1.0),
                C64::new(2.0, 0.1),
                C64::new(0.0, 0.7),
                C64::new(-1.1, 0.4),
            ],
        )
        .unwrap();
        let gram = &a.adjoint() * &a;
        let mut ev: Vec<f64> = super::super::herm_eig(&gram).unwrap().values.iter().map(|v| v.sqrt()).collect();
        ev.reverse();
        for (s, e) in singular_values(&a).iter().zip(ev) {
            assert!((s - e).abs() < 1e-13);
        }
    }
}
