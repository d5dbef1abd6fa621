//! Semi-classical limit: continuous field-atom equations between kicks, the
//! photon-exchange kick map, invariant monitoring, and strobe trajectories.
//!
//! Between kicks each cavity evolves independently under
//! dE/dt = -i beta S, dS/dt = i delta S + i beta E Sz,
//! dSz/dt = 2 i beta (S E* - S* E), which conserves the per-cavity
//! excitation N = |E|^2 + (Sz+1)/2 and the Bloch length Sz^2 + 4 S*S
//! exactly; the fixed-step integrator is judged against both.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::jc::SystemParams;
use crate::Result;

/// Abort threshold for the Bloch-sphere residual during strobed runs.
const BLOCH_ABORT: f64 = 1e-6;

/// Classical fields and Bloch vectors of the two cavities. Plain data; also
/// reused as its own time-derivative container.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    pub e1: Complex64,
    pub e2: Complex64,
    pub s1: Complex64,
    pub s2: Complex64,
    pub sz1: f64,
    pub sz2: f64,
}

/// Conserved quantities and constraint residuals of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalInvariants {
    pub n1: f64,
    pub n2: f64,
    pub n_total: f64,
    /// |Sz^2 + 4 S*S - 1| per atom.
    pub bloch1: f64,
    pub bloch2: f64,
}

impl ClassicalState {
    /// All excitations in cavity 2 as field energy, atoms in their ground
    /// states: E2 = sqrt(2), everything else zero except Sz = -1. Matches
    /// the two-excitation quantum sector.
    pub fn canonical() -> Self {
        Self {
            e1: Complex64::new(0.0, 0.0),
            e2: Complex64::new(2.0_f64.sqrt(), 0.0),
            s1: Complex64::new(0.0, 0.0),
            s2: Complex64::new(0.0, 0.0),
            sz1: -1.0,
            sz2: -1.0,
        }
    }

    /// Seeded random initial condition with atoms ground and two quanta of
    /// field energy split uniformly between the cavities, phases uniform.
    /// Same seed, same state.
    pub fn seeded(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let split: f64 = rng.gen();
        let phase1 = rng.gen_range(0.0..std::f64::consts::TAU);
        let phase2 = rng.gen_range(0.0..std::f64::consts::TAU);
        Self {
            e1: Complex64::from_polar((2.0 * split).sqrt(), phase1),
            e2: Complex64::from_polar((2.0 * (1.0 - split)).sqrt(), phase2),
            s1: Complex64::new(0.0, 0.0),
            s2: Complex64::new(0.0, 0.0),
            sz1: -1.0,
            sz2: -1.0,
        }
    }

    pub fn invariants(&self) -> ClassicalInvariants {
        let n1 = self.e1.norm_sqr() + (self.sz1 + 1.0) / 2.0;
        let n2 = self.e2.norm_sqr() + (self.sz2 + 1.0) / 2.0;
        ClassicalInvariants {
            n1,
            n2,
            n_total: n1 + n2,
            bloch1: (self.sz1 * self.sz1 + 4.0 * self.s1.norm_sqr() - 1.0).abs(),
            bloch2: (self.sz2 * self.sz2 + 4.0 * self.s2.norm_sqr() - 1.0).abs(),
        }
    }

    /// self + h * d, componentwise.
    fn axpy(&self, d: &ClassicalState, h: f64) -> ClassicalState {
        ClassicalState {
            e1: self.e1 + d.e1 * h,
            e2: self.e2 + d.e2 * h,
            s1: self.s1 + d.s1 * h,
            s2: self.s2 + d.s2 * h,
            sz1: self.sz1 + d.sz1 * h,
            sz2: self.sz2 + d.sz2 * h,
        }
    }
}

/// Which kick map mixes the two field amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KickConvention {
    /// Real rotation of (E1, E2) by kappa_tau.
    #[default]
    Rotation,
    /// Unitary mixing with -i cross terms, the Heisenberg image of the
    /// quantum kick.
    Unitary,
}

impl KickConvention {
    pub fn apply(self, state: &ClassicalState, params: &SystemParams) -> ClassicalState {
        match self {
            KickConvention::Rotation => kick_map(state, params),
            KickConvention::Unitary => kick_map_quantum_convention(state, params),
        }
    }
}

impl std::str::FromStr for KickConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "rotation" => Ok(KickConvention::Rotation),
            "unitary" => Ok(KickConvention::Unitary),
            other => Err(Error::InvalidParams(format!(
                "kick convention must be 'rotation' or 'unitary', got '{other}'"
            ))),
        }
    }
}

impl std::fmt::Display for KickConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KickConvention::Rotation => "rotation",
            KickConvention::Unitary => "unitary",
        })
    }
}

/// Right-hand side of the between-kick flow, each cavity independent.
pub fn deriv(state: &ClassicalState, params: &SystemParams) -> ClassicalState {
    let beta = params.beta();
    let i_delta = Complex64::new(0.0, params.delta());
    let i_beta = Complex64::new(0.0, beta);
    let cavity = |e: Complex64, s: Complex64, sz: f64| -> (Complex64, Complex64, f64) {
        let de = -i_beta * s;
        let ds = i_delta * s + i_beta * e * sz;
        // 2 i beta (S E* - S* E) is real: -4 beta Im(S E*).
        let dsz = -4.0 * beta * (s * e.conj()).im;
        (de, ds, dsz)
    };
    let (de1, ds1, dsz1) = cavity(state.e1, state.s1, state.sz1);
    let (de2, ds2, dsz2) = cavity(state.e2, state.s2, state.sz2);
    ClassicalState {
        e1: de1,
        e2: de2,
        s1: ds1,
        s2: ds2,
        sz1: dsz1,
        sz2: dsz2,
    }
}

/// Fixed-step fourth-order integration over a signed time span.
fn integrate(state: &ClassicalState, params: &SystemParams, span: f64, substeps: u32) -> ClassicalState {
    let h = span / f64::from(substeps);
    let mut y = *state;
    for _ in 0..substeps {
        let k1 = deriv(&y, params);
        let k2 = deriv(&y.axpy(&k1, h / 2.0), params);
        let k3 = deriv(&y.axpy(&k2, h / 2.0), params);
        let k4 = deriv(&y.axpy(&k3, h), params);
        y = ClassicalState {
            e1: y.e1 + (k1.e1 + (k2.e1 + k3.e1) * 2.0 + k4.e1) * (h / 6.0),
            e2: y.e2 + (k1.e2 + (k2.e2 + k3.e2) * 2.0 + k4.e2) * (h / 6.0),
            s1: y.s1 + (k1.s1 + (k2.s1 + k3.s1) * 2.0 + k4.s1) * (h / 6.0),
            s2: y.s2 + (k1.s2 + (k2.s2 + k3.s2) * 2.0 + k4.s2) * (h / 6.0),
            sz1: y.sz1 + (k1.sz1 + (k2.sz1 + k3.sz1) * 2.0 + k4.sz1) * (h / 6.0),
            sz2: y.sz2 + (k1.sz2 + (k2.sz2 + k3.sz2) * 2.0 + k4.sz2) * (h / 6.0),
        };
    }
    y
}

/// Advances the state through one kick-free flight of duration T.
pub fn step_between_kicks(
    state: &ClassicalState,
    params: &SystemParams,
    substeps: u32,
) -> Result<ClassicalState> {
    if substeps == 0 {
        return Err(Error::InvalidParams("substeps must be at least 1".into()));
    }
    Ok(integrate(state, params, params.period_t(), substeps))
}

/// Default flight resolution: max(200, ceil(50 * beta * T)) substeps, so one
/// substep never spans more than 0.02 of a coupling period.
pub fn default_substeps(params: &SystemParams) -> u32 {
    200_u32.max((50.0 * params.beta_t()).ceil() as u32)
}

/// Real rotation of the field pair by kappa_tau; atoms untouched.
/// |E1|^2 + |E2|^2 is conserved exactly.
pub fn kick_map(state: &ClassicalState, params: &SystemParams) -> ClassicalState {
    let (sin, cos) = params.kappa_tau().sin_cos();
    ClassicalState {
        e1: state.e1 * cos + state.e2 * sin,
        e2: -state.e1 * sin + state.e2 * cos,
        ..*state
    }
}

/// Unitary mixing with -i cross terms; same magnitudes, different phases.
pub fn kick_map_quantum_convention(
    state: &ClassicalState,
    params: &SystemParams,
) -> ClassicalState {
    let (sin, cos) = params.kappa_tau().sin_cos();
    let minus_i_sin = Complex64::new(0.0, -sin);
    ClassicalState {
        e1: state.e1 * cos + state.e2 * minus_i_sin,
        e2: state.e1 * minus_i_sin + state.e2 * cos,
        ..*state
    }
}

/// Runs the kicked dynamics for `n_kicks` periods, recording the full state
/// just after every kick (kick first, then flight, matching the quantum
/// propagator). Aborts when either atom leaves the Bloch sphere by more
/// than 1e-6, the signature of an under-resolved flight.
pub fn strobe_trajectory(
    init: &ClassicalState,
    params: &SystemParams,
    n_kicks: usize,
    substeps: u32,
    convention: KickConvention,
) -> Result<Vec<ClassicalState>> {
    if substeps == 0 {
        return Err(Error::InvalidParams("substeps must be at least 1".into()));
    }
    let guard = |state: &ClassicalState, kick: usize| -> Result<()> {
        let inv = state.invariants();
        let worst = inv.bloch1.max(inv.bloch2);
        if worst.is_nan() || worst > BLOCH_ABORT {
            return Err(Error::BlochAbort {
                kick,
                residual: worst,
                threshold: BLOCH_ABORT,
            });
        }
        Ok(())
    };
    guard(init, 0)?;

    let mut samples = Vec::with_capacity(n_kicks);
    let mut state = *init;
    for kick in 1..=n_kicks {
        state = convention.apply(&state, params);
        guard(&state, kick)?;
        samples.push(state);
        state = integrate(&state, params, params.period_t(), substeps);
    }
    Ok(samples)
}

/// Time-average of the cavity-2 excitation number over a strobed run.
pub fn average_n2(
    init: &ClassicalState,
    params: &SystemParams,
    n_kicks: usize,
    substeps: u32,
    convention: KickConvention,
) -> Result<f64> {
    if n_kicks == 0 {
        return Err(Error::InvalidParams("average needs at least one kick".into()));
    }
    let samples = strobe_trajectory(init, params, n_kicks, substeps, convention)?;
    Ok(samples.iter().map(|s| s.invariants().n2).sum::<f64>() / samples.len() as f64)
}
