//! Dense complex linear algebra and tensor-product helpers.

mod eig;
mod matrix;
mod qr;
mod space;
mod svd;

pub use eig::{herm_eig, psd_sqrt, HermEig, HERMITIAN_TOL};
pub use matrix::{kron, vec_norm, ComplexMatrix, C64};
pub(crate) use matrix::{ONE, ZERO};
pub use qr::{lstsq_solve, ColPivQr, LstsqSolution, RANK_TOL};
pub use space::{embed, partial_trace, DensityMatrix, HilbertSpace};
pub use svd::singular_values;

/// Qubit lowering operator |g⟩⟨e| with the ground state at index 0.
pub fn lowering() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 1)] = ONE;
    m
}

/// Truncated bosonic annihilation operator on `n` Fock levels.
pub fn annihilation(n: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
    }
    a
}
