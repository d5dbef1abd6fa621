//! Command-line front end: one subcommand per output family, flat-file
//! configuration with flag overrides, CSV to a file or stdout.
//!
//! Exit codes: 0 on success, 2 for configuration errors (bad keys, bad
//! values, parameter or shape violations, I/O), 3 for numerical aborts
//! raised while a run is in flight.

mod config;
mod output;

use std::f64::consts::TAU;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kicked_jc::classical::{default_substeps, strobe_trajectory, ClassicalState};
use kicked_jc::floquet::{evolve, floquet_spectrum, resonance_times, QuantumState};
use kicked_jc::jc::SystemParams;
use kicked_jc::sector::{observable_matrix, Atom, BareState, Observable, SectorBasis};
use kicked_jc::sweep::{
    sweep_classical_localization, sweep_observables_vs_kick, sweep_quantum_participation,
    SweepGrid,
};
use kicked_jc::{build_floquet, Error};

use config::{RunConfig, SweepKind};
use output::real;

#[derive(Parser)]
#[command(name = "kicked-jc", version, about = "Kicked coupled-cavity simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Floquet eigenphases, participation numbers, and subspace weights
    Spectrum(Overrides),
    /// Kick-by-kick expectation values from the all-in-one-cavity state
    Evolve(Overrides),
    /// Parameter-grid sweeps: quantum, classical, or observable averages
    Sweep(Overrides),
    /// Seeded semiclassical strobe trajectories
    Strobe(Overrides),
    /// Predicted resonant flight-phase values
    Resonances(Overrides),
}

#[derive(Args)]
pub struct Overrides {
    /// Flat key = value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long = "betaT")]
    beta_t: Option<f64>,
    #[arg(long = "kappa-tau")]
    kappa_tau: Option<f64>,
    #[arg(long = "L")]
    l_total: Option<u32>,
    #[arg(long = "n-kicks")]
    n_kicks: Option<usize>,
    #[arg(long)]
    substeps: Option<u32>,
    /// Sign of the photon-hopping kick exponent: -1 or +1
    #[arg(long = "kick-sign", allow_hyphen_values = true)]
    kick_sign: Option<String>,
    /// Semiclassical kick map: rotation or unitary
    #[arg(long = "classical-kick")]
    classical_kick: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, overrides) = match &cli.command {
        Command::Spectrum(o) => ("spectrum", o),
        Command::Evolve(o) => ("evolve", o),
        Command::Sweep(o) => ("sweep", o),
        Command::Strobe(o) => ("strobe", o),
        Command::Resonances(o) => ("resonances", o),
    };

    let cfg = match config::resolve(overrides) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cfg.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("config error: cannot set thread count: {e}");
            return ExitCode::from(2);
        }
    }

    let csv = match run(name, &cfg) {
        Ok(csv) => csv,
        Err(e) => {
            eprintln!("{name} failed: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    match output::write(overrides.out.as_deref(), &csv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

/// Parameter and shape violations are configuration mistakes; everything
/// else reports a run that started and then lost numerical footing.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParams(_) | Error::DimensionMismatch { .. } => 2,
        _ => 3,
    }
}

fn run(name: &str, cfg: &RunConfig) -> Result<String, RunError> {
    match name {
        "spectrum" => cmd_spectrum(cfg),
        "evolve" => cmd_evolve(cfg),
        "sweep" => cmd_sweep(cfg),
        "strobe" => cmd_strobe(cfg),
        "resonances" => cmd_resonances(cfg),
        _ => unreachable!("clap restricts the command set"),
    }
}

/// Library failures keep their exit-code split; config-shaped failures
/// discovered at run assembly reuse the InvalidParams channel.
type RunError = Error;

fn params_of(cfg: &RunConfig) -> kicked_jc::Result<SystemParams> {
    SystemParams::new(cfg.beta, cfg.delta, cfg.beta_t / cfg.beta, cfg.kappa_tau)
}

fn initial_state(basis: &SectorBasis) -> kicked_jc::Result<QuantumState> {
    let idx = basis
        .index_of(&BareState {
            atom1: Atom::Ground,
            photons1: basis.l_total(),
            atom2: Atom::Ground,
            photons2: 0,
        })
        .ok_or_else(|| Error::InvalidParams("sector lacks the all-photon state".into()))?;
    QuantumState::basis_state(basis, idx)
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<String, RunError> {
    let params = params_of(cfg)?;
    let basis = SectorBasis::new(cfg.l_total)?;
    let u = build_floquet(&basis, &params, cfg.kick_sign)?;
    let spectrum = floquet_spectrum(&u, &basis, &params)?;
    let proj = observable_matrix(Observable::ProjPsi2, &basis);

    let mut rows = Vec::with_capacity(basis.dim());
    for i in 0..basis.dim() {
        let state = QuantumState::new(spectrum.states.column(i).into_owned())?;
        rows.push(vec![
            i.to_string(),
            real(spectrum.eigenphases[i]),
            real(spectrum.participation[i]),
            real(state.expectation(&proj)?),
        ]);
    }
    Ok(output::render(
        &cfg.header("spectrum"),
        &["index", "eigenphase_rad", "participation", "psi2_weight"],
        &rows,
    ))
}

fn cmd_evolve(cfg: &RunConfig) -> Result<String, RunError> {
    let params = params_of(cfg)?;
    let basis = SectorBasis::new(cfg.l_total)?;
    let u = build_floquet(&basis, &params, cfg.kick_sign)?;
    let psi0 = initial_state(&basis)?;
    let n1 = observable_matrix(Observable::N1, &basis);
    let exc1 = &n1 + observable_matrix(Observable::Sz1Pop, &basis);
    let proj = observable_matrix(Observable::ProjPsi2, &basis);
    let series = evolve(&psi0, &u, cfg.n_kicks, &[n1, exc1, proj])?;

    let rows: Vec<Vec<String>> = series
        .values
        .iter()
        .zip(&series.norm_residuals)
        .enumerate()
        .map(|(kick, (values, residual))| {
            vec![
                kick.to_string(),
                real(values[0]),
                real(values[1]),
                real(values[2]),
                real(*residual),
            ]
        })
        .collect();
    Ok(output::render(
        &cfg.header("evolve"),
        &[
            "kick",
            "exp_n1",
            "exp_excitations_cav1",
            "exp_proj_psi2",
            "norm_residual",
        ],
        &rows,
    ))
}

fn cmd_sweep(cfg: &RunConfig) -> Result<String, RunError> {
    let kappa_axis = config::axis(cfg.kappa_tau_min, cfg.kappa_tau_max, cfg.kappa_tau_steps)
        .map_err(Error::InvalidParams)?;

    if cfg.sweep_kind == SweepKind::Observables {
        let params = params_of(cfg)?;
        let basis = SectorBasis::new(cfg.l_total)?;
        let psi0 = initial_state(&basis)?;
        let table = sweep_observables_vs_kick(
            &kappa_axis,
            &params,
            cfg.l_total,
            cfg.kick_sign,
            &psi0,
            cfg.n_kicks,
        )?;
        let mut rows = Vec::with_capacity(table.rows.len() * 7);
        for r in &table.rows {
            let quantities = [
                ("avg_n1", r.avg_n1),
                ("avg_sz1_pop", r.avg_sz1_pop),
                ("avg_szsz", r.avg_szsz),
                ("mean_participation", r.mean_participation),
                ("haar_n1", table.haar_n1),
                ("haar_sz1_pop", table.haar_sz1_pop),
                ("haar_szsz", table.haar_szsz),
            ];
            for (name, value) in quantities {
                rows.push(vec![
                    real(r.kappa_tau),
                    real(cfg.beta_t),
                    name.to_string(),
                    real(value),
                    "ok".to_string(),
                ]);
            }
        }
        return Ok(output::render(
            &cfg.header("sweep"),
            &["kappa_tau", "betaT", "quantity", "value", "status"],
            &rows,
        ));
    }

    let beta_t_axis = config::axis(cfg.beta_t_min, cfg.beta_t_max, cfg.beta_t_steps)
        .map_err(Error::InvalidParams)?;
    let grid = SweepGrid::new(kappa_axis, beta_t_axis, cfg.beta, cfg.delta)?;
    let result = match cfg.sweep_kind {
        SweepKind::Quantum => sweep_quantum_participation(&grid, cfg.l_total, cfg.kick_sign)?,
        SweepKind::Classical => sweep_classical_localization(
            &grid,
            &ClassicalState::canonical(),
            cfg.n_kicks,
            cfg.substeps,
            cfg.classical_kick,
        )?,
        SweepKind::Observables => unreachable!("handled above"),
    };

    let mut rows = Vec::new();
    for (i, &kappa_tau) in result.grid.kappa_tau_axis().iter().enumerate() {
        for (j, &beta_t) in result.grid.beta_t_axis().iter().enumerate() {
            rows.push(vec![
                real(kappa_tau),
                real(beta_t),
                real(result.values[i][j]),
                result.status[i][j].to_string(),
            ]);
        }
    }
    Ok(output::render(
        &cfg.header("sweep"),
        &["kappa_tau", "betaT", "value", "status"],
        &rows,
    ))
}

fn cmd_strobe(cfg: &RunConfig) -> Result<String, RunError> {
    let params = params_of(cfg)?;
    let substeps = cfg.substeps.unwrap_or_else(|| default_substeps(&params));
    let mut rows = Vec::new();
    for seed in cfg.seed..cfg.seed + cfg.n_seeds {
        let init = ClassicalState::seeded(seed);
        let samples =
            strobe_trajectory(&init, &params, cfg.n_kicks, substeps, cfg.classical_kick)?;
        for (k, s) in samples.iter().enumerate() {
            let inv = s.invariants();
            rows.push(vec![
                seed.to_string(),
                (k + 1).to_string(),
                real(s.e1.re),
                real(s.e1.im),
                real(s.e2.re),
                real(s.e2.im),
                real(s.s1.re),
                real(s.s1.im),
                real(s.s2.re),
                real(s.s2.im),
                real(s.sz1),
                real(s.sz2),
                real(inv.n1),
                real(inv.n2),
                real(inv.bloch1),
                real(inv.bloch2),
            ]);
        }
    }
    Ok(output::render(
        &cfg.header("strobe"),
        &[
            "seed_id",
            "kick",
            "re_e1",
            "im_e1",
            "re_e2",
            "im_e2",
            "re_s1",
            "im_s1",
            "re_s2",
            "im_s2",
            "sz1",
            "sz2",
            "n1",
            "n2",
            "bloch_residual_1",
            "bloch_residual_2",
        ],
        &rows,
    ))
}

fn cmd_resonances(cfg: &RunConfig) -> Result<String, RunError> {
    let rows: Vec<Vec<String>> = resonance_times(cfg.resonance_n_max, TAU)?
        .iter()
        .map(|r| {
            vec![
                r.family.label().to_string(),
                r.n.to_string(),
                real(r.beta_t / cfg.beta),
            ]
        })
        .collect();
    Ok(output::render(
        &cfg.header("resonances"),
        &["family", "n", "predicted_T"],
        &rows,
    ))
}
