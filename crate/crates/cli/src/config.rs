//! Run configuration: built-in defaults, then a flat `key = value` file,
//! then command-line overrides, in that order. Every key is validated when
//! it is read; unknown keys are rejected by name.

use std::fmt;
use std::str::FromStr;

use kicked_jc::classical::KickConvention;
use kicked_jc::sector::KickSign;

use crate::Overrides;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Quantum,
    Classical,
    Observables,
}

impl FromStr for SweepKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "quantum" => Ok(SweepKind::Quantum),
            "classical" => Ok(SweepKind::Classical),
            "observables" => Ok(SweepKind::Observables),
            other => Err(format!(
                "sweep kind must be quantum, classical, or observables, got '{other}'"
            )),
        }
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepKind::Quantum => "quantum",
            SweepKind::Classical => "classical",
            SweepKind::Observables => "observables",
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub beta: f64,
    pub delta: f64,
    pub beta_t: f64,
    pub kappa_tau: f64,
    pub l_total: u32,
    pub n_kicks: usize,
    pub substeps: Option<u32>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub kick_sign: KickSign,
    pub classical_kick: KickConvention,
    pub sweep_kind: SweepKind,
    pub kappa_tau_min: f64,
    pub kappa_tau_max: f64,
    pub kappa_tau_steps: usize,
    pub beta_t_min: f64,
    pub beta_t_max: f64,
    pub beta_t_steps: usize,
    pub n_seeds: u64,
    pub resonance_n_max: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            beta: 1.0,
            delta: 0.0,
            beta_t: 1.2,
            kappa_tau: 0.1,
            l_total: 2,
            n_kicks: 2000,
            substeps: None,
            seed: 0,
            threads: None,
            kick_sign: KickSign::default(),
            classical_kick: KickConvention::default(),
            sweep_kind: SweepKind::Quantum,
            kappa_tau_min: 0.0,
            kappa_tau_max: 2.0,
            kappa_tau_steps: 21,
            beta_t_min: 0.5,
            beta_t_max: 4.0,
            beta_t_steps: 15,
            n_seeds: 5,
            resonance_n_max: 3,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse::<T>()
        .map_err(|e| format!("invalid value for '{key}': {e}"))
}

impl RunConfig {
    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "beta" => self.beta = parse(key, value)?,
            "delta" => self.delta = parse(key, value)?,
            "betaT" => self.beta_t = parse(key, value)?,
            "kappa_tau" => self.kappa_tau = parse(key, value)?,
            "L" => self.l_total = parse(key, value)?,
            "n_kicks" => self.n_kicks = parse(key, value)?,
            "substeps" => self.substeps = Some(parse(key, value)?),
            "seed" => self.seed = parse(key, value)?,
            "threads" => self.threads = Some(parse(key, value)?),
            "kick_sign" => self.kick_sign = parse(key, value)?,
            "classical_kick" => self.classical_kick = parse(key, value)?,
            "sweep_kind" => self.sweep_kind = parse(key, value)?,
            "kappa_tau_min" => self.kappa_tau_min = parse(key, value)?,
            "kappa_tau_max" => self.kappa_tau_max = parse(key, value)?,
            "kappa_tau_steps" => self.kappa_tau_steps = parse(key, value)?,
            "betaT_min" => self.beta_t_min = parse(key, value)?,
            "betaT_max" => self.beta_t_max = parse(key, value)?,
            "betaT_steps" => self.beta_t_steps = parse(key, value)?,
            "n_seeds" => self.n_seeds = parse(key, value)?,
            "resonance_n_max" => self.resonance_n_max = parse(key, value)?,
            other => return Err(format!("unknown configuration key '{other}'")),
        }
        Ok(())
    }

    fn apply_file(&mut self, text: &str) -> Result<(), String> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected 'key = value'", lineno + 1))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    fn apply_overrides(&mut self, o: &Overrides) -> Result<(), String> {
        if let Some(v) = o.beta {
            self.beta = v;
        }
        if let Some(v) = o.delta {
            self.delta = v;
        }
        if let Some(v) = o.beta_t {
            self.beta_t = v;
        }
        if let Some(v) = o.kappa_tau {
            self.kappa_tau = v;
        }
        if let Some(v) = o.l_total {
            self.l_total = v;
        }
        if let Some(v) = o.n_kicks {
            self.n_kicks = v;
        }
        if let Some(v) = o.substeps {
            self.substeps = Some(v);
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.threads {
            self.threads = Some(v);
        }
        if let Some(s) = &o.kick_sign {
            self.kick_sign = parse("kick-sign", s)?;
        }
        if let Some(s) = &o.classical_kick {
            self.classical_kick = parse("classical-kick", s)?;
        }
        Ok(())
    }

    /// One comment line carrying the artifact version and every resolved
    /// setting, so any CSV can be traced back to its exact inputs.
    pub fn header(&self, command: &str) -> String {
        let substeps = match self.substeps {
            Some(n) => n.to_string(),
            None => "auto".into(),
        };
        let threads = match self.threads {
            Some(n) => n.to_string(),
            None => "auto".into(),
        };
        format!(
            "# kicked-jc {} command={command} beta={} delta={} betaT={} kappa_tau={} L={} \
             n_kicks={} substeps={substeps} seed={} threads={threads} kick_sign={} \
             classical_kick={} sweep_kind={} kappa_tau_axis={}..{}x{} betaT_axis={}..{}x{} \
             n_seeds={} resonance_n_max={}",
            env!("CARGO_PKG_VERSION"),
            self.beta,
            self.delta,
            self.beta_t,
            self.kappa_tau,
            self.l_total,
            self.n_kicks,
            self.seed,
            self.kick_sign,
            self.classical_kick,
            self.sweep_kind,
            self.kappa_tau_min,
            self.kappa_tau_max,
            self.kappa_tau_steps,
            self.beta_t_min,
            self.beta_t_max,
            self.beta_t_steps,
            self.n_seeds,
            self.resonance_n_max,
        )
    }
}

/// Defaults, then the config file named by `--config`, then flag overrides.
pub fn resolve(overrides: &Overrides) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &overrides.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
        cfg.apply_file(&text)?;
    }
    cfg.apply_overrides(overrides)?;
    Ok(cfg)
}

/// Inclusive axis with `steps` points; a single step collapses to `min`.
pub fn axis(min: f64, max: f64, steps: usize) -> Result<Vec<f64>, String> {
    if steps == 0 {
        return Err("axis step count must be at least 1".into());
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    Ok((0..steps)
        .map(|k| min + (max - min) * k as f64 / (steps - 1) as f64)
        .collect())
}
