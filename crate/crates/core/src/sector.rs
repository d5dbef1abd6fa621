//! The coupled two-cavity system restricted to a fixed total-excitation
//! sector: bare basis, drift Hamiltonian, photon-hop coupling, kick map,
//! cavity swap, and the measurable diagonal observables.
//!
//! Total excitations L = l1 + l2 are conserved by both the drift and the
//! hop, so the whole problem lives in the finite sector basis built here.
//! Dimension is 2L + 2(L-1) + ... : 4 at L=1, 8 at L=2, 12 at L=3.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::Error;
use crate::jc::SystemParams;
use crate::operator::{unitary_exp, CMatrix};
use crate::Result;

/// Two-level atom state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    Ground,
    Excited,
}

impl Atom {
    fn excitation(self) -> u32 {
        match self {
            Atom::Ground => 0,
            Atom::Excited => 1,
        }
    }

    /// Inversion eigenvalue: -1 for ground, +1 for excited.
    fn inversion(self) -> f64 {
        match self {
            Atom::Ground => -1.0,
            Atom::Excited => 1.0,
        }
    }
}

/// One bare product state |atom1, photons1> x |atom2, photons2>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BareState {
    pub atom1: Atom,
    pub photons1: u32,
    pub atom2: Atom,
    pub photons2: u32,
}

impl BareState {
    /// Excitations held by cavity 1 (photons plus atomic flag).
    pub fn excitations1(&self) -> u32 {
        self.photons1 + self.atom1.excitation()
    }

    /// Excitations held by cavity 2.
    pub fn excitations2(&self) -> u32 {
        self.photons2 + self.atom2.excitation()
    }

    /// The same state with the cavity labels exchanged.
    pub fn swapped(&self) -> BareState {
        BareState {
            atom1: self.atom2,
            photons1: self.photons2,
            atom2: self.atom1,
            photons2: self.photons1,
        }
    }
}

/// Ordered bare basis of the sector with total excitations `l_total`.
///
/// Canonical order: l1 descending, then atom1 ground before excited, then
/// atom2 ground before excited. This groups the all-in-one-cavity states at
/// the two ends of the basis.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    l_total: u32,
    states: Vec<BareState>,
    index: HashMap<BareState, usize>,
}

impl SectorBasis {
    pub fn new(l_total: u32) -> Result<Self> {
        if l_total == 0 {
            return Err(Error::InvalidParams(
                "sector must hold at least one excitation".into(),
            ));
        }
        let mut states = Vec::new();
        for l1 in (0..=l_total).rev() {
            let l2 = l_total - l1;
            for &atom1 in cavity_atoms(l1) {
                for &atom2 in cavity_atoms(l2) {
                    states.push(BareState {
                        atom1,
                        photons1: l1 - atom1.excitation(),
                        atom2,
                        photons2: l2 - atom2.excitation(),
                    });
                }
            }
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i))
            .collect();
        Ok(Self {
            l_total,
            states,
            index,
        })
    }

    pub fn l_total(&self) -> u32 {
        self.l_total
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[BareState] {
        &self.states
    }

    pub fn index_of(&self, state: &BareState) -> Option<usize> {
        self.index.get(state).copied()
    }
}

/// Atom labels compatible with `l` excitations in one cavity.
fn cavity_atoms(l: u32) -> &'static [Atom] {
    if l == 0 {
        &[Atom::Ground]
    } else {
        &[Atom::Ground, Atom::Excited]
    }
}

/// Permutation matrix exchanging the two cavity labels.
pub fn swap_matrix(basis: &SectorBasis) -> CMatrix {
    let dim = basis.dim();
    let mut p = CMatrix::zeros(dim, dim);
    for (i, state) in basis.states().iter().enumerate() {
        let j = basis
            .index_of(&state.swapped())
            .expect("sector is closed under cavity swap");
        p[(j, i)] = Complex64::new(1.0, 0.0);
    }
    p
}

/// Drift Hamiltonian: independent atom-photon exchange in each cavity.
///
/// Diagonal carries delta per excited atom; each cavity couples
/// (ground, p) <-> (excited, p-1) with element beta*sqrt(p). Block-diagonal
/// over the (l1, l2) split and swap-symmetric.
pub fn build_h0(basis: &SectorBasis, params: &SystemParams) -> CMatrix {
    let dim = basis.dim();
    let mut h = CMatrix::zeros(dim, dim);
    for (i, state) in basis.states().iter().enumerate() {
        let excited =
            f64::from(state.atom1.excitation() + state.atom2.excitation());
        h[(i, i)] = Complex64::new(params.delta() * excited, 0.0);

        if state.atom1 == Atom::Ground && state.photons1 >= 1 {
            let partner = BareState {
                atom1: Atom::Excited,
                photons1: state.photons1 - 1,
                ..*state
            };
            let j = basis.index_of(&partner).expect("same-sector partner");
            let v = Complex64::new(params.beta() * f64::from(state.photons1).sqrt(), 0.0);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
        if state.atom2 == Atom::Ground && state.photons2 >= 1 {
            let partner = BareState {
                atom2: Atom::Excited,
                photons2: state.photons2 - 1,
                ..*state
            };
            let j = basis.index_of(&partner).expect("same-sector partner");
            let v = Complex64::new(params.beta() * f64::from(state.photons2).sqrt(), 0.0);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    h
}

/// Photon hop between the cavities: a1†a2 + a2†a1 with bosonic factors.
///
/// Element between (p1, p2) and (p1+1, p2-1) is sqrt((p1+1)*p2); atomic
/// labels are untouched, so rows of purely atomic states are zero.
pub fn build_k(basis: &SectorBasis) -> CMatrix {
    let dim = basis.dim();
    let mut k = CMatrix::zeros(dim, dim);
    for (i, state) in basis.states().iter().enumerate() {
        if state.photons2 == 0 {
            continue;
        }
        let target = BareState {
            photons1: state.photons1 + 1,
            photons2: state.photons2 - 1,
            ..*state
        };
        let j = basis.index_of(&target).expect("hop conserves the sector");
        let v = Complex64::new(
            (f64::from(state.photons1 + 1) * f64::from(state.photons2)).sqrt(),
            0.0,
        );
        k[(j, i)] = v;
        k[(i, j)] = v;
    }
    k
}

/// Sign of the kick exponent: e^{sign * i * kappa_tau * K}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KickSign {
    /// Propagator of a Hamiltonian impulse, e^{-i kappa_tau K}.
    #[default]
    Negative,
    /// Conjugate convention, e^{+i kappa_tau K}.
    Positive,
}

impl KickSign {
    pub fn signum(self) -> f64 {
        match self {
            KickSign::Negative => -1.0,
            KickSign::Positive => 1.0,
        }
    }
}

impl FromStr for KickSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-1" => Ok(KickSign::Negative),
            "+1" | "1" => Ok(KickSign::Positive),
            other => Err(Error::InvalidParams(format!(
                "kick sign must be +1 or -1, got '{other}'"
            ))),
        }
    }
}

impl std::fmt::Display for KickSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KickSign::Negative => "-1",
            KickSign::Positive => "+1",
        })
    }
}

/// One-period propagator: free flight for time T, then the photon kick.
pub fn build_floquet(
    basis: &SectorBasis,
    params: &SystemParams,
    kick_sign: KickSign,
) -> Result<CMatrix> {
    let flight = unitary_exp(&build_h0(basis, params), -params.period_t())?;
    let kick = unitary_exp(&build_k(basis), kick_sign.signum() * params.kappa_tau())?;
    Ok(flight * kick)
}

/// Diagonal observables measurable on the sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    /// Photon number in cavity 1.
    N1,
    /// Photon number in cavity 2.
    N2,
    /// Excited-state population of atom 1, (sigma_z + 1)/2.
    Sz1Pop,
    /// Inversion correlator sigma_z1 * sigma_z2.
    SzSz,
    /// Projector onto the states holding every excitation in one cavity.
    ProjPsi2,
}

impl Observable {
    pub const ALL: [Observable; 5] = [
        Observable::N1,
        Observable::N2,
        Observable::Sz1Pop,
        Observable::SzSz,
        Observable::ProjPsi2,
    ];

    fn diagonal_value(self, state: &BareState, l_total: u32) -> f64 {
        match self {
            Observable::N1 => f64::from(state.photons1),
            Observable::N2 => f64::from(state.photons2),
            Observable::Sz1Pop => (state.atom1.inversion() + 1.0) / 2.0,
            Observable::SzSz => state.atom1.inversion() * state.atom2.inversion(),
            Observable::ProjPsi2 => {
                if state.excitations1() == l_total || state.excitations2() == l_total {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Observable::N1 => "n1",
            Observable::N2 => "n2",
            Observable::Sz1Pop => "sz1_pop",
            Observable::SzSz => "szsz",
            Observable::ProjPsi2 => "proj_psi2",
        };
        f.write_str(name)
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "n1" => Ok(Observable::N1),
            "n2" => Ok(Observable::N2),
            "sz1_pop" => Ok(Observable::Sz1Pop),
            "szsz" => Ok(Observable::SzSz),
            "proj_psi2" => Ok(Observable::ProjPsi2),
            other => Err(Error::InvalidParams(format!(
                "unknown observable '{other}' (expected n1, n2, sz1_pop, szsz, proj_psi2)"
            ))),
        }
    }
}

/// Matrix of an observable in the sector basis. All five are diagonal.
pub fn observable_matrix(observable: Observable, basis: &SectorBasis) -> CMatrix {
    let dim = basis.dim();
    let mut m = CMatrix::zeros(dim, dim);
    for (i, state) in basis.states().iter().enumerate() {
        m[(i, i)] = Complex64::new(observable.diagonal_value(state, basis.l_total()), 0.0);
    }
    m
}
