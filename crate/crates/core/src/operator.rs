//! Dense complex-matrix substrate: Hermitian eigendecomposition, unitary
//! exponentials, state application.
//!
//! Everything here works on small dense matrices (dimension a few dozen at
//! most), so exponentials go through an explicit eigendecomposition rather
//! than a series: the result is unitary up to eigensolver error by
//! construction.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex vector.
pub type CVector = DVector<Complex64>;

/// Default tolerance for the Hermiticity check in [`hermitian_eig`].
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are real and ascending (ties keep the solver's index order);
/// eigenvector columns are orthonormal and correspond to the eigenvalues by
/// position.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

/// Largest absolute entry of a matrix. Zero for an empty matrix.
pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest deviation from Hermiticity together with the offending entry.
fn hermiticity_deviation(m: &CMatrix) -> (usize, usize, f64) {
    let mut worst = (0, 0, 0.0_f64);
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
            if dev > worst.2 {
                worst = (i, j, dev);
            }
        }
    }
    worst
}

/// Diagonalizes a Hermitian matrix with eigenvalues sorted ascending.
///
/// Rejects input whose worst entry deviates from Hermiticity by more than
/// `tol`, naming that entry in the error.
pub fn hermitian_eig_with_tol(m: &CMatrix, tol: f64) -> Result<EigDecomposition> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    let (row, col, deviation) = hermiticity_deviation(m);
    if deviation > tol {
        return Err(Error::NotHermitian {
            row,
            col,
            deviation,
            tolerance: tol,
        });
    }
    let dim = m.nrows();
    let eig = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::EigenFailed { dim })?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = DVector::from_iterator(dim, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut eigenvectors = CMatrix::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(EigDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// [`hermitian_eig_with_tol`] at the default tolerance.
pub fn hermitian_eig(m: &CMatrix) -> Result<EigDecomposition> {
    hermitian_eig_with_tol(m, HERMITICITY_TOL)
}

/// Computes `exp(i * scale * h)` for Hermitian `h` via eigendecomposition.
pub fn unitary_exp(h: &CMatrix, scale: f64) -> Result<CMatrix> {
    let eig = hermitian_eig(h)?;
    let dim = h.nrows();
    let mut scaled = eig.eigenvectors.clone();
    for j in 0..dim {
        let phase = Complex64::from_polar(1.0, scale * eig.eigenvalues[j]);
        for i in 0..dim {
            scaled[(i, j)] *= phase;
        }
    }
    Ok(&scaled * eig.eigenvectors.adjoint())
}

/// Applies a matrix to a normalized state vector.
pub fn apply(u: &CMatrix, psi: &CVector) -> Result<CVector> {
    if u.ncols() != psi.len() {
        return Err(Error::DimensionMismatch {
            expected: u.ncols(),
            found: psi.len(),
        });
    }
    let deviation = (psi.norm() - 1.0).abs();
    if deviation > 1e-10 {
        return Err(Error::NotNormalized { deviation });
    }
    Ok(u * psi)
}
