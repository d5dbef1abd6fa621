//! Single-cavity Jaynes-Cummings structure: excitation blocks, dressed
//! doublets, generalized Rabi frequency.
//!
//! Within one cavity the excitation number l (photons plus atomic flag) is
//! conserved, so the Hamiltonian splits into 2x2 blocks spanned by
//! (|g,l>, |e,l-1>) for l >= 1, plus the bare ground state at l = 0.

use num_complex::Complex64;

use crate::error::Error;
use crate::operator::CMatrix;
use crate::Result;

/// Physical knobs of the kicked two-cavity system.
///
/// `beta` sets the frequency unit; the dynamics depend only on the
/// dimensionless products beta*T, kappa_tau, delta/beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    beta: f64,
    delta: f64,
    period_t: f64,
    kappa_tau: f64,
}

impl SystemParams {
    /// Validates and freezes a parameter set.
    ///
    /// `period_t` may be zero: that isolates the bare kick, which is useful
    /// for calibrating the kick map on its own.
    pub fn new(beta: f64, delta: f64, period_t: f64, kappa_tau: f64) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "coupling beta must be positive and finite, got {beta}"
            )));
        }
        if !delta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "detuning delta must be finite, got {delta}"
            )));
        }
        if !period_t.is_finite() || period_t < 0.0 {
            return Err(Error::InvalidParams(format!(
                "drive period must be non-negative and finite, got {period_t}"
            )));
        }
        if !kappa_tau.is_finite() || kappa_tau < 0.0 {
            return Err(Error::InvalidParams(format!(
                "kick strength kappa_tau must be non-negative and finite, got {kappa_tau}"
            )));
        }
        Ok(Self {
            beta,
            delta,
            period_t,
            kappa_tau,
        })
    }

    /// Atom-photon coupling energy; sets the frequency unit.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Atom-photon detuning, same units as `beta`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Time between kicks.
    pub fn period_t(&self) -> f64 {
        self.period_t
    }

    /// Dimensionless kick strength.
    pub fn kappa_tau(&self) -> f64 {
        self.kappa_tau
    }

    /// Dimensionless flight phase beta*T.
    pub fn beta_t(&self) -> f64 {
        self.beta * self.period_t
    }

    /// Same parameters with a different drive period.
    pub fn with_period_t(&self, period_t: f64) -> Result<Self> {
        Self::new(self.beta, self.delta, period_t, self.kappa_tau)
    }

    /// Same parameters with a different kick strength.
    pub fn with_kappa_tau(&self, kappa_tau: f64) -> Result<Self> {
        Self::new(self.beta, self.delta, self.period_t, kappa_tau)
    }
}

/// Which branch of a dressed doublet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// One dressed eigenstate of a single-cavity excitation block.
///
/// `amplitudes` are real coefficients on the bare pair (|g,l>, |e,l-1>).
/// `energy` follows the convention sign*chi - delta/2; the bare block of
/// [`jc_block_hamiltonian`] carries the same spectrum shifted by the
/// constant `delta` (its eigenvalues are sign*chi + delta/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedLevel {
    pub l: u32,
    pub branch: Branch,
    pub theta: f64,
    pub chi: f64,
    pub energy: f64,
    pub amplitudes: [f64; 2],
}

/// Generalized Rabi frequency chi(l) = sqrt(beta^2 l + delta^2/4).
pub fn chi(l: u32, params: &SystemParams) -> f64 {
    (params.beta * params.beta * f64::from(l) + params.delta * params.delta / 4.0).sqrt()
}

/// Dressed doublet of the l-th excitation block, ordered (plus, minus).
///
/// |+,l> = sin(theta)|g,l> + cos(theta)|e,l-1> at energy +chi - delta/2;
/// |-,l> = cos(theta)|g,l> - sin(theta)|e,l-1> at energy -chi - delta/2;
/// theta in [0, pi/2) from atan2(2 beta sqrt(l), delta + 2 chi). The
/// denominator is strictly positive for l >= 1, so the branch is unique.
pub fn dressed_states(l: u32, params: &SystemParams) -> Result<(DressedLevel, DressedLevel)> {
    if l == 0 {
        return Err(Error::InvalidParams(
            "l = 0 block has only the bare ground state, no dressed doublet".into(),
        ));
    }
    let chi_l = chi(l, params);
    let coupling = params.beta * f64::from(l).sqrt();
    let theta = (2.0 * coupling).atan2(params.delta + 2.0 * chi_l);
    let (sin_t, cos_t) = theta.sin_cos();
    let half_delta = params.delta / 2.0;
    let plus = DressedLevel {
        l,
        branch: Branch::Plus,
        theta,
        chi: chi_l,
        energy: chi_l - half_delta,
        amplitudes: [sin_t, cos_t],
    };
    let minus = DressedLevel {
        l,
        branch: Branch::Minus,
        theta,
        chi: chi_l,
        energy: -chi_l - half_delta,
        amplitudes: [cos_t, -sin_t],
    };
    Ok((plus, minus))
}

/// Bare-basis Hamiltonian block of the l-th excitation manifold.
///
/// For l >= 1 in the ordering (|g,l>, |e,l-1>): diagonal (0, delta),
/// off-diagonal beta*sqrt(l). For l = 0 the 1x1 zero matrix.
pub fn jc_block_hamiltonian(l: u32, params: &SystemParams) -> CMatrix {
    if l == 0 {
        return CMatrix::zeros(1, 1);
    }
    let coupling = Complex64::new(params.beta * f64::from(l).sqrt(), 0.0);
    let mut m = CMatrix::zeros(2, 2);
    m[(1, 1)] = Complex64::new(params.delta, 0.0);
    m[(0, 1)] = coupling;
    m[(1, 0)] = coupling;
    m
}
