//! Simulator for a pair of Jaynes-Cummings cavities coupled by a periodically
//! kicked photon-hopping term.
//!
//! The quantum side works in a fixed total-excitation sector: it builds the
//! static Hamiltonian and the hopping operator, assembles the one-period
//! Floquet operator, and extracts eigenphases, participation numbers,
//! tunneling splittings and resonance predictions. The semiclassical side
//! integrates the coupled field-Bloch equations between kicks and applies the
//! field rotation at each kick, tracking the motion's invariants. A sweep
//! engine evaluates either side over parameter grids, in parallel when the
//! `parallel` feature (on by default) is enabled.

pub mod classical;
pub mod error;
pub mod floquet;
pub mod jc;
pub mod operator;
pub mod sector;
pub mod sweep;

pub use classical::{
    average_n2, default_substeps, deriv, kick_map, kick_map_quantum_convention,
    step_between_kicks, strobe_trajectory, ClassicalInvariants, ClassicalState, KickConvention,
};
pub use error::Error;
pub use floquet::{
    evolve, floquet_spectrum, h0_reference_basis, participation, random_state_mean,
    random_state_mean_mc, resonance_times, tunneling_analysis, EvolveSeries, FloquetSpectrum,
    QuantumState, ResonanceFamily, ResonanceTime, TunnelingOutcome, TunnelingReport,
};
pub use jc::{chi, dressed_states, jc_block_hamiltonian, Branch, DressedLevel, SystemParams};
pub use operator::{apply, hermitian_eig, unitary_exp, CMatrix, CVector, EigDecomposition};
pub use sector::{
    build_floquet, build_h0, build_k, observable_matrix, swap_matrix, Atom, BareState, KickSign,
    Observable, SectorBasis,
};
pub use sweep::{
    sweep_classical_localization, sweep_classical_localization_serial, sweep_observables_vs_kick,
    sweep_observables_vs_kick_serial, sweep_quantum_participation,
    sweep_quantum_participation_serial, CellStatus, ObservablesRow, ObservablesTable, SweepGrid,
    SweepResult,
};

/// Library result type.
pub type Result<T> = std::result::Result<T, Error>;
