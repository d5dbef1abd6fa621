//! Floquet analysis of the kicked pair: eigenphase spectrum, participation
//! against the kick-free eigenbasis, stroboscopic evolution, tunneling
//! doublets, and the resonance-time predictions.
//!
//! The one-period propagator U is unitary, not Hermitian, so its spectrum is
//! recovered from the commuting Hermitian pair A = (U+U†)/2, B = (U−U†)/2i.
//! A alone is blind to the sign of an eigenphase (cos is even), which is why
//! B must be rediagonalized inside every A-eigenvalue cluster before phases
//! are read off as atan2(<B>, <A>).

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Error;
use crate::jc::SystemParams;
use crate::operator::{hermitian_eig, max_abs, CMatrix, CVector};
use crate::sector::{build_h0, observable_matrix, swap_matrix, Observable, SectorBasis};
use crate::Result;

/// Matching eigenvalues closer than this are treated as one degenerate
/// cluster of the real part A.
const A_CLUSTER_TOL: f64 = 1e-11;
/// Eigenphases closer than this are treated as one degenerate phase cluster.
const PHASE_CLUSTER_TOL: f64 = 1e-10;
/// Drift-Hamiltonian eigenvalues closer than this share a degenerate block.
const H0_CLUSTER_TOL: f64 = 1e-9;
/// Hard bound on the per-state eigenpair residual ||U v - e^{i lambda} v||.
const RESIDUAL_BOUND: f64 = 1e-10;

/// Normalized amplitude vector over a sector basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: CVector,
}

impl QuantumState {
    /// Wraps an amplitude vector, requiring unit norm within 1e-10.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let deviation = (amplitudes.norm() - 1.0).abs();
        if deviation > 1e-10 {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { amplitudes })
    }

    /// The bare basis state at `index`.
    pub fn basis_state(basis: &SectorBasis, index: usize) -> Result<Self> {
        if index >= basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: index,
            });
        }
        let mut amplitudes = CVector::zeros(basis.dim());
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Real expectation value of a Hermitian observable.
    pub fn expectation(&self, observable: &CMatrix) -> Result<f64> {
        if observable.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: observable.ncols(),
                found: self.dim(),
            });
        }
        Ok(expectation_of(&self.amplitudes, observable))
    }

    pub fn overlap(&self, other: &QuantumState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// Eigenphases, eigenstates, and participation numbers of one propagator.
///
/// Eigenphases are ascending in (-pi, pi]; column i of `states` belongs to
/// `eigenphases[i]` and satisfies U v = e^{i lambda} v within 1e-10.
#[derive(Debug, Clone)]
pub struct FloquetSpectrum {
    pub eigenphases: Vec<f64>,
    pub states: CMatrix,
    pub participation: Vec<f64>,
}

impl FloquetSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenphases.len()
    }

    pub fn state(&self, i: usize) -> QuantumState {
        QuantumState {
            amplitudes: self.states.column(i).into_owned(),
        }
    }
}

/// Time series of expectation values strobed once per kick.
///
/// Row k of `values` holds the requested observables immediately after the
/// k-th kick; row 0 is the initial state. `norm_residuals[k]` is the norm
/// drift |  ||psi_k|| - 1 |.
#[derive(Debug, Clone)]
pub struct EvolveSeries {
    pub values: Vec<Vec<f64>>,
    pub norm_residuals: Vec<f64>,
}

/// Tunneling doublet found by [`tunneling_analysis`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnelingReport {
    /// Eigenphase splitting of the pair, folded into [0, pi].
    pub phi: f64,
    /// Kicks for one full population transfer, pi/phi.
    pub predicted_period_kicks: f64,
    /// Mean weight of the pair on the all-in-one-cavity subspace.
    pub subspace_weight: f64,
    /// Spectrum indices of the paired states (anchor, partner).
    pub pair: (usize, usize),
}

/// Outcome of the doublet search: either a localized pair or nothing
/// carrying dominant subspace weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TunnelingOutcome {
    Localized(TunnelingReport),
    Delocalized,
}

/// One predicted resonant drive time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceTime {
    pub family: ResonanceFamily,
    pub n: u32,
    pub beta_t: f64,
}

/// The three families of resonant flight phases, n * base per harmonic n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResonanceFamily {
    /// base = sqrt(2)/2: the two-excitation doublet rephases.
    HalfSqrt2,
    /// base = 1 + sqrt(2)/2.
    OnePlusHalfSqrt2,
    /// base = 1 - sqrt(2)/2.
    OneMinusHalfSqrt2,
}

impl ResonanceFamily {
    pub const ALL: [ResonanceFamily; 3] = [
        ResonanceFamily::HalfSqrt2,
        ResonanceFamily::OnePlusHalfSqrt2,
        ResonanceFamily::OneMinusHalfSqrt2,
    ];

    pub fn base(self) -> f64 {
        let half_sqrt2 = std::f64::consts::SQRT_2 / 2.0;
        match self {
            ResonanceFamily::HalfSqrt2 => half_sqrt2,
            ResonanceFamily::OnePlusHalfSqrt2 => 1.0 + half_sqrt2,
            ResonanceFamily::OneMinusHalfSqrt2 => 1.0 - half_sqrt2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ResonanceFamily::HalfSqrt2 => "half_sqrt2",
            ResonanceFamily::OnePlusHalfSqrt2 => "one_plus_half_sqrt2",
            ResonanceFamily::OneMinusHalfSqrt2 => "one_minus_half_sqrt2",
        }
    }
}

impl std::fmt::Display for ResonanceFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

fn expectation_of(v: &CVector, m: &CMatrix) -> f64 {
    v.dotc(&(m * v)).re
}

/// Folds a phase into (-pi, pi].
fn wrap_phase(x: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let r = x.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r - two_pi
    } else {
        r
    }
}

/// Contiguous index ranges of near-equal values in an ascending slice.
fn cluster_by_gap(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol {
            clusters.push(start..i);
            start = i;
        }
    }
    clusters
}

/// Multiplies a column by the phase making its largest-magnitude entry real
/// positive. Strictly-greater comparison keeps the earliest entry on ties.
fn fix_column_phase(col: &mut CVector) {
    let mut best = 0;
    let mut best_norm = col[0].norm();
    for i in 1..col.len() {
        let n = col[i].norm();
        if n > best_norm {
            best = i;
            best_norm = n;
        }
    }
    if best_norm > 0.0 {
        let phase = col[best].conj() / Complex64::new(best_norm, 0.0);
        for z in col.iter_mut() {
            *z *= phase;
        }
    }
}

/// Reorients an orthonormal cluster to match `targets` where possible.
///
/// Each target column is projected into the cluster span, orthogonalized
/// against the vectors already accepted, and kept when more than half its
/// norm survives. Columns of the original cluster fill any shortfall, so the
/// result always spans the same subspace.
fn align_span(cluster: &CMatrix, targets: &CMatrix) -> CMatrix {
    let dim = cluster.nrows();
    let m = cluster.ncols();
    let mut accepted: Vec<CVector> = Vec::with_capacity(m);

    let try_accept = |candidate: CVector, threshold: f64, accepted: &mut Vec<CVector>| {
        let mut w = candidate;
        for a in accepted.iter() {
            let ov = a.dotc(&w);
            w -= a * ov;
        }
        let n = w.norm();
        if n > threshold {
            accepted.push(w / Complex64::new(n, 0.0));
        }
    };

    for t in targets.column_iter() {
        if accepted.len() == m {
            break;
        }
        let coeff = cluster.adjoint() * t;
        try_accept(cluster * coeff, 0.5, &mut accepted);
    }
    for v in cluster.column_iter() {
        if accepted.len() == m {
            break;
        }
        try_accept(v.into_owned(), 1e-6, &mut accepted);
    }

    let mut out = CMatrix::zeros(dim, m);
    for (j, a) in accepted.iter().enumerate() {
        out.set_column(j, a);
    }
    out
}

/// Orthonormal eigenbasis of the kick-free Hamiltonian with every freedom
/// pinned, so spectra from different runs and parameter points are
/// comparable column by column.
///
/// Degenerate levels are resolved into cavity-swap eigenstates, symmetric
/// branch first; any degeneracy deeper than swap falls back to alignment
/// with the bare basis. Every column's largest-magnitude amplitude is made
/// real positive.
pub fn h0_reference_basis(basis: &SectorBasis, params: &SystemParams) -> Result<CMatrix> {
    let dim = basis.dim();
    let eig = hermitian_eig(&build_h0(basis, params))?;
    let swap = swap_matrix(basis);
    let identity = CMatrix::identity(dim, dim);

    let mut out = CMatrix::zeros(dim, dim);
    let mut next = 0;
    for cluster in cluster_by_gap(eig.eigenvalues.as_slice(), H0_CLUSTER_TOL) {
        let m = cluster.len();
        if m == 1 {
            out.set_column(next, &eig.eigenvectors.column(cluster.start));
            next += 1;
            continue;
        }
        let vc = eig.eigenvectors.columns(cluster.start, m).clone_owned();
        let s_raw = vc.adjoint() * &swap * &vc;
        let s_sub = (&s_raw + s_raw.adjoint()) * Complex64::new(0.5, 0.0);
        let s_eig = hermitian_eig(&s_sub)?;

        // Swap eigenvalues descending puts the symmetric branch first.
        let descending: Vec<usize> = (0..m).rev().collect();
        let mut cols = CMatrix::zeros(dim, m);
        let mut swap_vals = Vec::with_capacity(m);
        for (slot, &j) in descending.iter().enumerate() {
            let col = &vc * s_eig.eigenvectors.column(j);
            cols.set_column(slot, &col);
            swap_vals.push(-s_eig.eigenvalues[j]);
        }
        for group in cluster_by_gap(&swap_vals, 1e-6) {
            if group.len() > 1 {
                let sub = cols.columns(group.start, group.len()).clone_owned();
                let aligned = align_span(&sub, &identity);
                for (off, col) in aligned.column_iter().enumerate() {
                    cols.set_column(group.start + off, &col);
                }
            }
        }
        for col in cols.column_iter() {
            out.set_column(next, &col);
            next += 1;
        }
    }

    for j in 0..dim {
        let mut col = out.column(j).into_owned();
        fix_column_phase(&mut col);
        out.set_column(j, &col);
    }
    Ok(out)
}

/// Diagonalizes a one-period propagator and scores every eigenstate's
/// participation against the kick-free reference basis.
///
/// Degenerate eigenphase clusters are aligned to the reference basis so that
/// the kick-free limit returns the reference states themselves.
pub fn floquet_spectrum(
    u_f: &CMatrix,
    basis: &SectorBasis,
    params: &SystemParams,
) -> Result<FloquetSpectrum> {
    let dim = basis.dim();
    if u_f.nrows() != dim || u_f.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: u_f.nrows(),
        });
    }
    let deviation = max_abs(&(u_f.adjoint() * u_f - CMatrix::identity(dim, dim)));
    if deviation > 1e-12 {
        return Err(Error::NotUnitary { deviation });
    }

    let a_mat = (u_f + u_f.adjoint()) * Complex64::new(0.5, 0.0);
    let b_mat = (u_f - u_f.adjoint()) * Complex64::new(0.0, -0.5);
    let eig_a = hermitian_eig(&a_mat)?;

    let mut pairs: Vec<(f64, CVector)> = Vec::with_capacity(dim);
    for cluster in cluster_by_gap(eig_a.eigenvalues.as_slice(), A_CLUSTER_TOL) {
        let m = cluster.len();
        let columns: Vec<CVector> = if m == 1 {
            vec![eig_a.eigenvectors.column(cluster.start).into_owned()]
        } else {
            let vc = eig_a.eigenvectors.columns(cluster.start, m).clone_owned();
            let b_raw = vc.adjoint() * &b_mat * &vc;
            let b_sub = (&b_raw + b_raw.adjoint()) * Complex64::new(0.5, 0.0);
            let b_eig = hermitian_eig(&b_sub)?;
            (0..m).map(|j| &vc * b_eig.eigenvectors.column(j)).collect()
        };
        for v in columns {
            let lambda = expectation_of(&v, &b_mat).atan2(expectation_of(&v, &a_mat));
            pairs.push((lambda, v));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let phases: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut clusters = cluster_by_gap(&phases, PHASE_CLUSTER_TOL);
    // A degenerate cluster can straddle the -pi/pi seam; merge it.
    let mut wrapped_tail = 0;
    if clusters.len() >= 2 {
        let first = clusters.first().unwrap().clone();
        let last = clusters.last().unwrap().clone();
        if phases[first.start] + std::f64::consts::TAU - phases[last.end - 1] < PHASE_CLUSTER_TOL {
            wrapped_tail = last.len();
            clusters.pop();
            clusters[0] = 0..first.end;
        }
    }

    let reference = h0_reference_basis(basis, params)?;
    let mut states = CMatrix::zeros(dim, dim);
    for (i, (_, v)) in pairs.iter().enumerate() {
        states.set_column(i, v);
    }
    for cluster in &clusters {
        let mut member_cols: Vec<usize> = cluster.clone().collect();
        if *cluster == clusters[0] && wrapped_tail > 0 {
            member_cols.extend(dim - wrapped_tail..dim);
        }
        if member_cols.len() < 2 {
            continue;
        }
        let mut sub = CMatrix::zeros(dim, member_cols.len());
        for (slot, &i) in member_cols.iter().enumerate() {
            sub.set_column(slot, &states.column(i));
        }
        let aligned = align_span(&sub, &reference);
        for (slot, &i) in member_cols.iter().enumerate() {
            states.set_column(i, &aligned.column(slot));
        }
    }

    for j in 0..dim {
        let mut col = states.column(j).into_owned();
        fix_column_phase(&mut col);
        states.set_column(j, &col);
    }

    let eigenphases: Vec<f64> = phases;
    for (i, lambda) in eigenphases.iter().enumerate() {
        let v = states.column(i).into_owned();
        let residual = (u_f * &v - &v * Complex64::from_polar(1.0, *lambda)).norm();
        if residual > RESIDUAL_BOUND {
            return Err(Error::SpectrumResidual {
                residual,
                bound: RESIDUAL_BOUND,
            });
        }
    }

    let participation: Vec<f64> = (0..dim)
        .map(|i| participation_from_overlaps(&(reference.adjoint() * states.column(i))))
        .collect();

    Ok(FloquetSpectrum {
        eigenphases,
        states,
        participation,
    })
}

fn participation_from_overlaps(overlaps: &CVector) -> f64 {
    let d = overlaps.len() as f64;
    let sum4: f64 = overlaps.iter().map(|z| z.norm_sqr() * z.norm_sqr()).sum();
    1.0 / (d * sum4)
}

/// Participation number of a state against an orthonormal reference basis:
/// P = 1 / (d * sum_i |<psi|ref_i>|^4), ranging from 1/d (a single reference
/// state) to 1 (spread evenly over all of them).
pub fn participation(psi: &QuantumState, reference: &CMatrix) -> Result<f64> {
    let d = psi.dim();
    if reference.nrows() != d || reference.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: reference.nrows(),
        });
    }
    let deviation = max_abs(&(reference.adjoint() * reference - CMatrix::identity(d, d)));
    if deviation > 1e-10 {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(participation_from_overlaps(
        &(reference.adjoint() * &psi.amplitudes),
    ))
}

/// Strobes a state through `n_kicks` applications of the propagator,
/// recording each observable's expectation after every kick. Row 0 is the
/// initial state.
pub fn evolve(
    psi0: &QuantumState,
    u_f: &CMatrix,
    n_kicks: usize,
    observables: &[CMatrix],
) -> Result<EvolveSeries> {
    let d = psi0.dim();
    if u_f.ncols() != d || u_f.nrows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: u_f.ncols(),
        });
    }
    for m in observables {
        if m.ncols() != d || m.nrows() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: m.ncols(),
            });
        }
    }
    let mut psi = psi0.amplitudes.clone();
    let mut values = Vec::with_capacity(n_kicks + 1);
    let mut norm_residuals = Vec::with_capacity(n_kicks + 1);
    for kick in 0..=n_kicks {
        if kick > 0 {
            psi = u_f * psi;
        }
        values.push(observables.iter().map(|m| expectation_of(&psi, m)).collect());
        norm_residuals.push((psi.norm() - 1.0).abs());
    }
    Ok(EvolveSeries {
        values,
        norm_residuals,
    })
}

/// Exact mean expectation of a Hermitian observable over uniformly random
/// normalized states: Tr(A)/d.
pub fn random_state_mean(observable: &CMatrix) -> f64 {
    observable.trace().re / observable.nrows() as f64
}

/// Monte-Carlo cross-check of [`random_state_mean`] from seeded
/// complex-Gaussian vectors.
pub fn random_state_mean_mc(observable: &CMatrix, samples: usize, seed: u64) -> f64 {
    let d = observable.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut total = 0.0;
    for _ in 0..samples {
        let mut v = CVector::from_fn(d, |_, _| {
            Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))
        });
        v /= Complex64::new(v.norm(), 0.0);
        total += expectation_of(&v, observable);
    }
    total / samples as f64
}

/// Searches a spectrum for the tunneling doublet: the pair of Floquet states
/// that dominate the all-in-one-cavity subspace.
///
/// The anchor is the state with the largest subspace weight above 1/2; its
/// partner is the other above-1/2 state nearest in folded eigenphase. The
/// pair only counts as a doublet while its splitting stays under half the
/// mean eigenphase spacing pi/dim; otherwise, or when fewer than two states
/// clear the weight bar, the spectrum is reported as delocalized rather
/// than forced into a pair.
pub fn tunneling_analysis(
    spectrum: &FloquetSpectrum,
    basis: &SectorBasis,
) -> Result<TunnelingOutcome> {
    let dim = basis.dim();
    if spectrum.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: spectrum.dim(),
        });
    }
    let proj = observable_matrix(Observable::ProjPsi2, basis);
    let weights: Vec<f64> = (0..dim)
        .map(|i| expectation_of(&spectrum.states.column(i).into_owned(), &proj))
        .collect();

    let candidates: Vec<usize> = (0..dim).filter(|&i| weights[i] > 0.5).collect();
    if candidates.len() < 2 {
        return Ok(TunnelingOutcome::Delocalized);
    }
    let mut anchor = candidates[0];
    for &i in &candidates[1..] {
        if weights[i] > weights[anchor] {
            anchor = i;
        }
    }
    let folded = |i: usize| wrap_phase(spectrum.eigenphases[anchor] - spectrum.eigenphases[i]).abs();
    let mut partner = usize::MAX;
    for &i in &candidates {
        if i == anchor {
            continue;
        }
        if partner == usize::MAX || folded(i) < folded(partner) {
            partner = i;
        }
    }

    let phi = folded(partner);
    if phi >= std::f64::consts::PI / dim as f64 {
        return Ok(TunnelingOutcome::Delocalized);
    }
    Ok(TunnelingOutcome::Localized(TunnelingReport {
        phi,
        predicted_period_kicks: std::f64::consts::PI / phi,
        subspace_weight: (weights[anchor] + weights[partner]) / 2.0,
        pair: (anchor, partner),
    }))
}

/// Predicted resonant flight phases beta*T for harmonics 1..=n_max of the
/// three families, each value scale * n * base, ascending and de-duplicated
/// within 1e-9. `scale` carries the drive-time normalization (2*pi for the
/// physical drive period).
pub fn resonance_times(n_max: u32, scale: f64) -> Result<Vec<ResonanceTime>> {
    if n_max == 0 {
        return Err(Error::InvalidParams(
            "resonance harmonic count must be at least 1".into(),
        ));
    }
    if !scale.is_finite() || scale <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "resonance scale must be positive and finite, got {scale}"
        )));
    }
    let mut times = Vec::with_capacity(3 * n_max as usize);
    for n in 1..=n_max {
        for family in ResonanceFamily::ALL {
            times.push(ResonanceTime {
                family,
                n,
                beta_t: scale * f64::from(n) * family.base(),
            });
        }
    }
    times.sort_by(|x, y| x.beta_t.total_cmp(&y.beta_t));
    times.dedup_by(|b, a| (b.beta_t - a.beta_t).abs() < 1e-9);
    Ok(times)
}
