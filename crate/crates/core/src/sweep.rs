//! Parameter-grid evaluation: mean Floquet participation and classical
//! localization maps over (kappa_tau, beta*T), plus long-time observable
//! averages along a kick-strength axis.
//!
//! Every cell is a pure function of the grid and its index, so the engine
//! evaluates them in any order: in parallel through rayon when the
//! `parallel` feature is on (the default), serially otherwise. Both paths
//! produce bit-identical results; a failed cell carries NaN and a status
//! instead of poisoning the sweep.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::classical::{average_n2, default_substeps, ClassicalState, KickConvention};
use crate::error::Error;
use crate::floquet::{evolve, floquet_spectrum, random_state_mean, QuantumState};
use crate::jc::SystemParams;
use crate::sector::{build_floquet, observable_matrix, KickSign, Observable, SectorBasis};
use crate::Result;

/// Kicks discarded before a long-time average; transients otherwise bias
/// weak-kick cells.
pub const BURN_IN_KICKS: usize = 100;

/// Rectangular (kappa_tau, beta*T) grid with the fixed physical remainder.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    kappa_tau_axis: Vec<f64>,
    beta_t_axis: Vec<f64>,
    beta: f64,
    delta: f64,
}

impl SweepGrid {
    /// Axes must be nonempty, strictly ascending, non-negative, finite.
    pub fn new(
        kappa_tau_axis: Vec<f64>,
        beta_t_axis: Vec<f64>,
        beta: f64,
        delta: f64,
    ) -> Result<Self> {
        check_axis("kappa_tau axis", &kappa_tau_axis)?;
        check_axis("betaT axis", &beta_t_axis)?;
        SystemParams::new(beta, delta, 0.0, 0.0)?;
        Ok(Self {
            kappa_tau_axis,
            beta_t_axis,
            beta,
            delta,
        })
    }

    pub fn kappa_tau_axis(&self) -> &[f64] {
        &self.kappa_tau_axis
    }

    pub fn beta_t_axis(&self) -> &[f64] {
        &self.beta_t_axis
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    fn cell_params(&self, i: usize, j: usize) -> Result<SystemParams> {
        SystemParams::new(
            self.beta,
            self.delta,
            self.beta_t_axis[j] / self.beta,
            self.kappa_tau_axis[i],
        )
    }
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::InvalidParams(format!("{name} must be nonempty")));
    }
    for (k, v) in axis.iter().enumerate() {
        if !v.is_finite() || *v < 0.0 {
            return Err(Error::InvalidParams(format!(
                "{name}[{k}] must be non-negative and finite, got {v}"
            )));
        }
        if k > 0 && axis[k - 1] >= *v {
            return Err(Error::InvalidParams(format!(
                "{name} must be strictly ascending at index {k}"
            )));
        }
    }
    Ok(())
}

/// Per-cell diagnostic of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Ok,
    IntegrationAbort,
    Delocalized,
}

impl std::fmt::Display for CellStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CellStatus::Ok => "ok",
            CellStatus::IntegrationAbort => "integration-abort",
            CellStatus::Delocalized => "delocalized",
        })
    }
}

/// One scalar and one status per grid cell; `values[i][j]` belongs to
/// `kappa_tau_axis[i]`, `beta_t_axis[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: SweepGrid,
    pub values: Vec<Vec<f64>>,
    pub status: Vec<Vec<CellStatus>>,
}

fn assemble(grid: &SweepGrid, flat: Vec<(f64, CellStatus)>) -> SweepResult {
    let nb = grid.beta_t_axis.len();
    let mut values = Vec::with_capacity(grid.kappa_tau_axis.len());
    let mut status = Vec::with_capacity(grid.kappa_tau_axis.len());
    for chunk in flat.chunks(nb) {
        values.push(chunk.iter().map(|c| c.0).collect());
        status.push(chunk.iter().map(|c| c.1).collect());
    }
    SweepResult {
        grid: grid.clone(),
        values,
        status,
    }
}

fn quantum_cell(
    grid: &SweepGrid,
    basis: &SectorBasis,
    i: usize,
    j: usize,
    kick_sign: KickSign,
) -> (f64, CellStatus) {
    let outcome = grid.cell_params(i, j).and_then(|p| {
        let u = build_floquet(basis, &p, kick_sign)?;
        let spec = floquet_spectrum(&u, basis, &p)?;
        Ok(spec.participation.iter().sum::<f64>() / spec.dim() as f64)
    });
    match outcome {
        Ok(v) => (v, CellStatus::Ok),
        Err(_) => (f64::NAN, CellStatus::IntegrationAbort),
    }
}

/// Mean Floquet participation per grid cell.
pub fn sweep_quantum_participation(
    grid: &SweepGrid,
    l_total: u32,
    kick_sign: KickSign,
) -> Result<SweepResult> {
    #[cfg(feature = "parallel")]
    {
        let basis = SectorBasis::new(l_total)?;
        let nb = grid.beta_t_axis.len();
        let flat: Vec<(f64, CellStatus)> = (0..grid.kappa_tau_axis.len() * nb)
            .into_par_iter()
            .map(|idx| quantum_cell(grid, &basis, idx / nb, idx % nb, kick_sign))
            .collect();
        Ok(assemble(grid, flat))
    }
    #[cfg(not(feature = "parallel"))]
    {
        sweep_quantum_participation_serial(grid, l_total, kick_sign)
    }
}

/// Single-threaded reference implementation of
/// [`sweep_quantum_participation`]; results are bit-identical.
pub fn sweep_quantum_participation_serial(
    grid: &SweepGrid,
    l_total: u32,
    kick_sign: KickSign,
) -> Result<SweepResult> {
    let basis = SectorBasis::new(l_total)?;
    let nb = grid.beta_t_axis.len();
    let mut flat = Vec::with_capacity(grid.kappa_tau_axis.len() * nb);
    for i in 0..grid.kappa_tau_axis.len() {
        for j in 0..nb {
            flat.push(quantum_cell(grid, &basis, i, j, kick_sign));
        }
    }
    Ok(assemble(grid, flat))
}

fn classical_cell(
    grid: &SweepGrid,
    init: &ClassicalState,
    n_kicks: usize,
    substeps: Option<u32>,
    convention: KickConvention,
    i: usize,
    j: usize,
) -> (f64, CellStatus) {
    let outcome = grid.cell_params(i, j).and_then(|p| {
        let steps = substeps.unwrap_or_else(|| default_substeps(&p));
        average_n2(init, &p, n_kicks, steps, convention)
    });
    match outcome {
        Ok(v) => (v, CellStatus::Ok),
        Err(_) => (f64::NAN, CellStatus::IntegrationAbort),
    }
}

/// Time-averaged cavity-2 excitation per grid cell, from one shared initial
/// condition. `substeps = None` resolves each cell's flight by
/// [`default_substeps`] for its own period.
pub fn sweep_classical_localization(
    grid: &SweepGrid,
    init: &ClassicalState,
    n_kicks: usize,
    substeps: Option<u32>,
    convention: KickConvention,
) -> Result<SweepResult> {
    #[cfg(feature = "parallel")]
    {
        let nb = grid.beta_t_axis.len();
        let flat: Vec<(f64, CellStatus)> = (0..grid.kappa_tau_axis.len() * nb)
            .into_par_iter()
            .map(|idx| {
                classical_cell(grid, init, n_kicks, substeps, convention, idx / nb, idx % nb)
            })
            .collect();
        Ok(assemble(grid, flat))
    }
    #[cfg(not(feature = "parallel"))]
    {
        sweep_classical_localization_serial(grid, init, n_kicks, substeps, convention)
    }
}

/// Single-threaded reference implementation of
/// [`sweep_classical_localization`]; results are bit-identical.
pub fn sweep_classical_localization_serial(
    grid: &SweepGrid,
    init: &ClassicalState,
    n_kicks: usize,
    substeps: Option<u32>,
    convention: KickConvention,
) -> Result<SweepResult> {
    let nb = grid.beta_t_axis.len();
    let mut flat = Vec::with_capacity(grid.kappa_tau_axis.len() * nb);
    for i in 0..grid.kappa_tau_axis.len() {
        for j in 0..nb {
            flat.push(classical_cell(grid, init, n_kicks, substeps, convention, i, j));
        }
    }
    Ok(assemble(grid, flat))
}

/// Long-time averages at one kick strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservablesRow {
    pub kappa_tau: f64,
    pub avg_n1: f64,
    pub avg_sz1_pop: f64,
    pub avg_szsz: f64,
    pub mean_participation: f64,
}

/// Observable averages along a kick-strength axis, with the random-ensemble
/// reference value for each observable.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservablesTable {
    pub rows: Vec<ObservablesRow>,
    pub haar_n1: f64,
    pub haar_sz1_pop: f64,
    pub haar_szsz: f64,
}

fn observables_point(
    kappa_tau: f64,
    params: &SystemParams,
    basis: &SectorBasis,
    kick_sign: KickSign,
    psi0: &QuantumState,
    n_kicks: usize,
) -> Result<ObservablesRow> {
    let p = params.with_kappa_tau(kappa_tau)?;
    let u = build_floquet(basis, &p, kick_sign)?;
    let observables = [
        observable_matrix(Observable::N1, basis),
        observable_matrix(Observable::Sz1Pop, basis),
        observable_matrix(Observable::SzSz, basis),
    ];
    let series = evolve(psi0, &u, n_kicks, &observables)?;
    let tail = &series.values[BURN_IN_KICKS..];
    let mean = |col: usize| tail.iter().map(|row| row[col]).sum::<f64>() / tail.len() as f64;

    let spec = floquet_spectrum(&u, basis, &p)?;
    Ok(ObservablesRow {
        kappa_tau,
        avg_n1: mean(0),
        avg_sz1_pop: mean(1),
        avg_szsz: mean(2),
        mean_participation: spec.participation.iter().sum::<f64>() / spec.dim() as f64,
    })
}

/// Long-time averages of cavity-1 occupation, atomic population, and the
/// inversion correlator over a kick-strength axis, with mean Floquet
/// participation and the Haar reference values.
pub fn sweep_observables_vs_kick(
    kappa_tau_axis: &[f64],
    params: &SystemParams,
    l_total: u32,
    kick_sign: KickSign,
    psi0: &QuantumState,
    n_kicks: usize,
) -> Result<ObservablesTable> {
    check_axis("kappa_tau axis", kappa_tau_axis)?;
    if n_kicks <= BURN_IN_KICKS {
        return Err(Error::InvalidParams(format!(
            "n_kicks must exceed the {BURN_IN_KICKS}-kick burn-in, got {n_kicks}"
        )));
    }
    let basis = SectorBasis::new(l_total)?;
    #[cfg(feature = "parallel")]
    let rows: Result<Vec<ObservablesRow>> = kappa_tau_axis
        .par_iter()
        .map(|&kt| observables_point(kt, params, &basis, kick_sign, psi0, n_kicks))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Result<Vec<ObservablesRow>> = kappa_tau_axis
        .iter()
        .map(|&kt| observables_point(kt, params, &basis, kick_sign, psi0, n_kicks))
        .collect();

    Ok(ObservablesTable {
        rows: rows?,
        haar_n1: random_state_mean(&observable_matrix(Observable::N1, &basis)),
        haar_sz1_pop: random_state_mean(&observable_matrix(Observable::Sz1Pop, &basis)),
        haar_szsz: random_state_mean(&observable_matrix(Observable::SzSz, &basis)),
    })
}

/// Single-threaded variant of [`sweep_observables_vs_kick`]; results are
/// bit-identical.
pub fn sweep_observables_vs_kick_serial(
    kappa_tau_axis: &[f64],
    params: &SystemParams,
    l_total: u32,
    kick_sign: KickSign,
    psi0: &QuantumState,
    n_kicks: usize,
) -> Result<ObservablesTable> {
    check_axis("kappa_tau axis", kappa_tau_axis)?;
    if n_kicks <= BURN_IN_KICKS {
        return Err(Error::InvalidParams(format!(
            "n_kicks must exceed the {BURN_IN_KICKS}-kick burn-in, got {n_kicks}"
        )));
    }
    let basis = SectorBasis::new(l_total)?;
    let rows: Result<Vec<ObservablesRow>> = kappa_tau_axis
        .iter()
        .map(|&kt| observables_point(kt, params, &basis, kick_sign, psi0, n_kicks))
        .collect();
    Ok(ObservablesTable {
        rows: rows?,
        haar_n1: random_state_mean(&observable_matrix(Observable::N1, &basis)),
        haar_sz1_pop: random_state_mean(&observable_matrix(Observable::Sz1Pop, &basis)),
        haar_szsz: random_state_mean(&observable_matrix(Observable::SzSz, &basis)),
    })
}
