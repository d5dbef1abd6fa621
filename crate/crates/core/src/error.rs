//! Error type shared by every module.

use thiserror::Error;

/// Failure modes of matrix routines, spectrum extraction and classical
/// integration.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input claimed Hermitian deviates beyond tolerance; reports the
    /// worst-offending entry.
    #[error("matrix is not Hermitian: |M[{row},{col}] - conj(M[{col},{row}])| = {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
        tolerance: f64,
    },

    /// Input claimed unitary deviates beyond tolerance.
    #[error("matrix is not unitary: max |U†U - I| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    /// Operand dimensions do not match.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// State vector norm is off unity beyond tolerance.
    #[error("state is not normalized: |norm - 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    /// Reference basis fails the orthonormality check.
    #[error("reference basis is not orthonormal: max |V†V - I| = {deviation:.3e}")]
    NotOrthonormal { deviation: f64 },

    /// Parameter validation failed.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Eigensolver did not converge.
    #[error("eigendecomposition failed to converge (dim {dim})")]
    EigenFailed { dim: usize },

    /// Floquet eigenpair residual exceeded its bound; the spectrum is not
    /// trustworthy.
    #[error("Floquet eigenpair residual {residual:.3e} exceeds {bound:.3e}")]
    SpectrumResidual { residual: f64, bound: f64 },

    /// Classical integration violated the Bloch-sphere constraint; the
    /// trajectory has blown up.
    #[error("Bloch constraint residual {residual:.3e} at kick {kick} exceeds abort threshold {threshold:.3e}")]
    BlochAbort {
        kick: usize,
        residual: f64,
        threshold: f64,
    },
}
