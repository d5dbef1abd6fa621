//! Acceptance gate: one test per shipping criterion. Each test prints a
//! PASS line with the measured numbers (visible under --nocapture, and
//! automatically for failures); the test name carries the criterion number.

use std::f64::consts::{PI, TAU};

use kicked_jc::classical::{
    average_n2, step_between_kicks, strobe_trajectory, ClassicalState, KickConvention,
};
use kicked_jc::floquet::{evolve, floquet_spectrum, resonance_times, QuantumState};
use kicked_jc::jc::SystemParams;
use kicked_jc::operator::{hermitian_eig, unitary_exp, CMatrix};
use kicked_jc::sector::{
    build_floquet, build_h0, build_k, observable_matrix, swap_matrix, Atom, BareState, KickSign,
    Observable, SectorBasis,
};
use kicked_jc::sweep::sweep_observables_vs_kick;

fn params(beta_t: f64, kappa_tau: f64) -> SystemParams {
    SystemParams::new(1.0, 0.0, beta_t, kappa_tau).unwrap()
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

fn both_quanta_in_cavity_1(basis: &SectorBasis) -> QuantumState {
    let idx = basis
        .index_of(&BareState {
            atom1: Atom::Ground,
            photons1: 2,
            atom2: Atom::Ground,
            photons2: 0,
        })
        .unwrap();
    QuantumState::basis_state(basis, idx).unwrap()
}

/// Transfer-period detector for the cavity-1 excitation series: smooth with
/// a centered 13-sample moving average, find the first contiguous run below
/// half the initial value, report the envelope minimum inside that run.
fn transfer_period_kicks(e1: &[f64]) -> Option<usize> {
    const WINDOW: usize = 13;
    let half = WINDOW / 2;
    let n = e1.len();
    let smooth: Vec<f64> = (0..n)
        .map(|k| {
            let lo = k.saturating_sub(half);
            let hi = (k + half + 1).min(n);
            e1[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect();
    let threshold = 0.5 * e1[0];
    let start = smooth.iter().position(|&v| v < threshold)?;
    let end = (start..n).find(|&k| smooth[k] >= threshold).unwrap_or(n);
    let mut best = start;
    for k in start..end {
        if smooth[k] < smooth[best] {
            best = k;
        }
    }
    Some(best)
}

#[test]
fn criterion_01_unitarity_and_swap_symmetry() {
    let basis = SectorBasis::new(2).unwrap();
    let swap = swap_matrix(&basis);
    let eye = CMatrix::identity(basis.dim(), basis.dim());
    let mut worst_unitarity = 0.0f64;
    let mut worst_commutator = 0.0f64;
    for &kappa_tau in &linspace(0.0, 2.0, 10) {
        for &beta_t in &linspace(0.1, 7.0, 10) {
            let u = build_floquet(&basis, &params(beta_t, kappa_tau), KickSign::default())
                .unwrap();
            worst_unitarity = worst_unitarity.max(max_abs(&(u.adjoint() * &u - &eye)));
            worst_commutator = worst_commutator.max(max_abs(&(&u * &swap - &swap * &u)));
        }
    }
    assert!(
        worst_unitarity < 1e-12,
        "FAIL criterion 1: unitarity residual {worst_unitarity:.3e}"
    );
    assert!(
        worst_commutator < 1e-12,
        "FAIL criterion 1: swap commutator {worst_commutator:.3e}"
    );
    println!(
        "PASS criterion 1: unitarity residual {worst_unitarity:.3e}, \
         swap commutator {worst_commutator:.3e} over the 10x10 grid"
    );
}

#[test]
fn criterion_02_kick_free_limit() {
    let basis = SectorBasis::new(2).unwrap();
    let p = params(1.2, 0.0);
    let u = build_floquet(&basis, &p, KickSign::default()).unwrap();
    let spectrum = floquet_spectrum(&u, &basis, &p).unwrap();

    let worst_p = spectrum
        .participation
        .iter()
        .map(|v| (v - 0.125).abs())
        .fold(0.0, f64::max);
    assert!(
        worst_p < 1e-12,
        "FAIL criterion 2: participation deviates from 1/8 by {worst_p:.3e}"
    );

    let mut expected: Vec<f64> = hermitian_eig(&build_h0(&basis, &p))
        .unwrap()
        .eigenvalues
        .iter()
        .map(|e| wrap(-e * p.period_t()))
        .collect();
    expected.sort_by(f64::total_cmp);
    let mut got = spectrum.eigenphases.clone();
    got.sort_by(f64::total_cmp);
    let worst_phase = expected
        .iter()
        .zip(&got)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(
        worst_phase < 1e-10,
        "FAIL criterion 2: eigenphase mismatch {worst_phase:.3e}"
    );

    let mut cluster_sizes = Vec::new();
    let mut run = 1usize;
    for k in 1..got.len() {
        if (got[k] - got[k - 1]).abs() < 1e-10 {
            run += 1;
        } else {
            cluster_sizes.push(run);
            run = 1;
        }
    }
    cluster_sizes.push(run);
    cluster_sizes.sort_unstable();
    assert_eq!(
        cluster_sizes,
        vec![1, 1, 2, 2, 2],
        "FAIL criterion 2: degeneracy pattern {cluster_sizes:?}"
    );
    println!(
        "PASS criterion 2: participation residual {worst_p:.3e}, eigenphase residual \
         {worst_phase:.3e}, degeneracies three pairs + two singlets"
    );
}

#[test]
fn criterion_03_delta_kick_oracle() {
    let basis = SectorBasis::new(2).unwrap();
    let p = params(1.2, 0.3);
    let u_f = build_floquet(&basis, &p, KickSign::default()).unwrap();
    let h0 = build_h0(&basis, &p);
    let k = build_k(&basis);

    let square_pulse_error = |tau: f64| -> f64 {
        let substeps = 10_000u32;
        let h_pulse = &h0 + &k * num_complex::Complex64::new(p.kappa_tau() / tau, 0.0);
        let step = unitary_exp(&h_pulse, -(tau / substeps as f64)).unwrap();
        let mut pulse = CMatrix::identity(basis.dim(), basis.dim());
        for _ in 0..substeps {
            pulse = &step * pulse;
        }
        let flight = unitary_exp(&h0, -(p.period_t() - tau)).unwrap();
        max_abs(&(flight * pulse - &u_f))
    };

    let err = square_pulse_error(1e-3);
    let err_half = square_pulse_error(5e-4);
    assert!(
        err < 1e-3,
        "FAIL criterion 3: square-pulse error {err:.3e} at tau*beta=1e-3"
    );
    assert!(
        err_half < err,
        "FAIL criterion 3: halving tau did not reduce the error ({err:.3e} -> {err_half:.3e})"
    );
    println!(
        "PASS criterion 3: square-pulse error {err:.3e} at tau*beta=1e-3, \
         {err_half:.3e} after halving tau"
    );
}

#[test]
fn criterion_04_tunneling_reproduction() {
    let basis = SectorBasis::new(2).unwrap();
    let psi0 = both_quanta_in_cavity_1(&basis);
    let exc1 = observable_matrix(Observable::N1, &basis)
        + observable_matrix(Observable::Sz1Pop, &basis);
    let proj = observable_matrix(Observable::ProjPsi2, &basis);

    let run = |kappa_tau: f64| -> (usize, f64, f64) {
        let p = params(1.2, kappa_tau);
        let u = build_floquet(&basis, &p, KickSign::default()).unwrap();
        let series = evolve(&psi0, &u, 2000, &[exc1.clone(), proj.clone()]).unwrap();
        let e1: Vec<f64> = series.values.iter().map(|row| row[0]).collect();
        let proj_avg = series.values.iter().map(|row| row[1]).sum::<f64>()
            / series.values.len() as f64;

        let spectrum = floquet_spectrum(&u, &basis, &p).unwrap();
        let phi = match kicked_jc::tunneling_analysis(&spectrum, &basis).unwrap() {
            kicked_jc::TunnelingOutcome::Localized(report) => report.phi,
            kicked_jc::TunnelingOutcome::Delocalized => {
                panic!("FAIL criterion 4: delocalized at kappa_tau={kappa_tau}")
            }
        };
        let observed = transfer_period_kicks(&e1)
            .unwrap_or_else(|| panic!("FAIL criterion 4: no transfer dip at {kappa_tau}"));
        (observed, PI / phi, proj_avg)
    };

    let (obs1, pred1, proj1) = run(0.1);
    let rel1 = (obs1 as f64 - pred1).abs() / pred1;
    assert!(
        rel1 < 0.10,
        "FAIL criterion 4a: observed period {obs1} vs predicted {pred1:.2} ({rel1:.3} off)"
    );
    assert!(
        proj1 - 0.5 >= 0.2,
        "FAIL criterion 4b: subspace average {proj1:.4} not 0.2 above 0.5"
    );

    let (obs2, _, proj2) = run(0.2);
    assert!(
        obs2 < obs1 && proj2 < proj1,
        "FAIL criterion 4c: period {obs2} vs {obs1}, projection {proj2:.4} vs {proj1:.4}"
    );
    println!(
        "PASS criterion 4: period {obs1} kicks vs pi/phi {pred1:.2} ({:.2}% off), \
         subspace averages {proj1:.4} -> {proj2:.4}, periods {obs1} -> {obs2}",
        100.0 * rel1
    );
}

#[test]
fn criterion_05_resonance_delocalization() {
    let basis = SectorBasis::new(2).unwrap();
    let mean_participation = |beta_t: f64| -> f64 {
        let p = params(beta_t, 0.05);
        let u = build_floquet(&basis, &p, KickSign::default()).unwrap();
        let spectrum = floquet_spectrum(&u, &basis, &p).unwrap();
        spectrum.participation.iter().sum::<f64>() / basis.dim() as f64
    };

    let predictions: Vec<f64> = resonance_times(2, TAU)
        .unwrap()
        .iter()
        .map(|r| r.beta_t)
        .take(2)
        .collect();
    let mut peak_report = Vec::new();
    for &pred in &predictions {
        let lo = 0.93 * pred;
        let hi = 1.07 * pred;
        let n = ((hi - lo) / 0.002).ceil() as usize + 1;
        let axis = linspace(lo, hi, n);
        let values: Vec<f64> = axis.iter().map(|&bt| mean_participation(bt)).collect();
        let mut peak = 0usize;
        for k in 1..n {
            if values[k] > values[peak] {
                peak = k;
            }
        }
        assert!(
            peak > 0 && peak < n - 1,
            "FAIL criterion 5: maximum sits on the scan edge for prediction {pred:.4}"
        );
        let rel = (axis[peak] - pred).abs() / pred;
        assert!(
            rel <= 0.05,
            "FAIL criterion 5: peak at {:.4} vs predicted {pred:.4} ({rel:.3} off)",
            axis[peak]
        );
        peak_report.push((pred, axis[peak], values[peak]));
    }

    for &valley in &[1.2, 2.6, 4.1] {
        let v = mean_participation(valley);
        assert!(
            v < 0.25,
            "FAIL criterion 5: off-resonant mean participation {v:.4} at betaT={valley}"
        );
    }
    println!("PASS criterion 5: peaks {peak_report:?}, valleys below 0.25");
}

#[test]
fn criterion_06_ergodic_asymptote() {
    let basis = SectorBasis::new(2).unwrap();
    let psi0 = both_quanta_in_cavity_1(&basis);
    let p = params(1.2, 0.0);
    let table =
        sweep_observables_vs_kick(&[0.02, 2.0], &p, 2, KickSign::default(), &psi0, 2000)
            .unwrap();

    let ergodic = table.rows[1];
    let checks = [
        ("n1", ergodic.avg_n1, table.haar_n1),
        ("sz1_pop", ergodic.avg_sz1_pop, table.haar_sz1_pop),
        ("szsz", ergodic.avg_szsz, table.haar_szsz),
    ];
    for (name, avg, haar) in checks {
        let tol = 0.15 * haar.abs().max(1.0);
        assert!(
            (avg - haar).abs() <= tol,
            "FAIL criterion 6: {name} average {avg:.4} vs Haar {haar:.4} (tol {tol:.3})"
        );
    }

    let frozen = table.rows[0];
    let deviations = [
        (frozen.avg_n1 - table.haar_n1).abs() / table.haar_n1.abs().max(1.0),
        (frozen.avg_sz1_pop - table.haar_sz1_pop).abs() / table.haar_sz1_pop.abs().max(1.0),
        (frozen.avg_szsz - table.haar_szsz).abs() / table.haar_szsz.abs().max(1.0),
    ];
    assert!(
        deviations.iter().any(|&d| d > 0.30),
        "FAIL criterion 6: no observable deviates by 30% in the weak-kick regime {deviations:?}"
    );
    println!(
        "PASS criterion 6: ergodic averages ({:.4}, {:.4}, {:.4}) vs Haar ({:.4}, {:.4}, {:.4}); \
         weak-kick deviations {deviations:?}",
        ergodic.avg_n1,
        ergodic.avg_sz1_pop,
        ergodic.avg_szsz,
        table.haar_n1,
        table.haar_sz1_pop,
        table.haar_szsz
    );
}

#[test]
fn criterion_07_classical_conservation() {
    let p = params(1.7, 0.4);
    let mut worst_n = 0.0f64;
    let mut worst_bloch = 0.0f64;
    for seed in 0..10u64 {
        let init = ClassicalState::seeded(seed);
        let n0 = init.invariants().n_total;
        let samples = strobe_trajectory(&init, &p, 1000, 400, KickConvention::Rotation).unwrap();
        for s in &samples {
            let inv = s.invariants();
            worst_n = worst_n.max((inv.n_total - n0).abs());
            worst_bloch = worst_bloch.max(inv.bloch1.max(inv.bloch2));
        }
    }
    assert!(
        worst_n < 1e-8,
        "FAIL criterion 7: total-excitation drift {worst_n:.3e}"
    );
    assert!(
        worst_bloch < 1e-8,
        "FAIL criterion 7: Bloch residual {worst_bloch:.3e}"
    );

    // Order check against a fine reference trajectory; the conserved
    // quantities themselves superconverge with erratic sign cancellation
    // and cannot resolve the integrator order.
    let flight = params(1.7, 0.0);
    let init = ClassicalState::seeded(0);
    let run = |substeps: u32| -> ClassicalState {
        let mut state = init;
        for _ in 0..20 {
            state = step_between_kicks(&state, &flight, substeps).unwrap();
        }
        state
    };
    let reference = run(3200);
    let err = |s: &ClassicalState| -> f64 {
        ((s.e1 - reference.e1).norm_sqr()
            + (s.e2 - reference.e2).norm_sqr()
            + (s.s1 - reference.s1).norm_sqr()
            + (s.s2 - reference.s2).norm_sqr()
            + (s.sz1 - reference.sz1).powi(2)
            + (s.sz2 - reference.sz2).powi(2))
        .sqrt()
    };
    let ratio = err(&run(100)) / err(&run(200));
    assert!(
        ratio >= 12.0,
        "FAIL criterion 7: step halving reduced the trajectory error only {ratio:.1}x"
    );
    println!(
        "PASS criterion 7: N drift {worst_n:.3e}, Bloch residual {worst_bloch:.3e} \
         over 10 seeds x 1000 kicks; halving ratio {ratio:.1}x"
    );
}

#[test]
fn criterion_08_classical_localization_contrast() {
    let init = ClassicalState::canonical();
    let localized =
        average_n2(&init, &params(1.0, 0.05), 1000, 800, KickConvention::Rotation).unwrap();
    let resonant =
        average_n2(&init, &params(TAU, 0.05), 1000, 800, KickConvention::Rotation).unwrap();
    let contrast = localized - resonant;
    println!(
        "criterion 8 measured: localized {localized:.4}, resonant {resonant:.4}, \
         contrast {contrast:.4}"
    );
    assert!(
        contrast >= 0.3,
        "FAIL criterion 8: localization contrast {contrast:.4} below required 0.3 \
         (localized {localized:.4}, resonant {resonant:.4})"
    );
    println!("PASS criterion 8: localization contrast {contrast:.4}");
}

#[test]
fn criterion_09_strobe_ring_regime() {
    let p = params(0.1, 1.3);
    let mut worst_cv = 0.0f64;
    for seed in 0..5u64 {
        let init = ClassicalState::seeded(seed);
        let samples = strobe_trajectory(&init, &p, 200, 200, KickConvention::Rotation).unwrap();
        let energy: Vec<f64> = samples
            .iter()
            .map(|s| s.e1.norm_sqr() + s.e2.norm_sqr())
            .collect();
        let mean = energy.iter().sum::<f64>() / energy.len() as f64;
        let var =
            energy.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / energy.len() as f64;
        let cv = var.sqrt() / mean;
        worst_cv = worst_cv.max(cv);
    }
    assert!(
        worst_cv < 0.05,
        "FAIL criterion 9: field-energy coefficient of variation {worst_cv:.4}"
    );
    println!("PASS criterion 9: worst field-energy coefficient of variation {worst_cv:.4}");
}
