//! Exact diagonalization of dimerized spin-1/2 Heisenberg chains and the
//! thermal entanglement (Wootters concurrence) of their nearest-neighbour
//! pairs.
//!
//! The pipeline is
//! [`build_hamiltonian`] → [`SpectralDecomposition`] → [`GibbsWeights`] →
//! [`reduce_to_pair`] → [`concurrence`], wrapped by [`PreparedChain`] and the
//! grid driver [`run_sweep`].

pub mod analysis;
pub mod entanglement;
pub mod error;
pub mod hamiltonian;
pub mod hilbert;
pub mod matrix;
pub mod pipeline;
pub mod spectral;
pub mod sweep;
pub mod symmetry;
pub mod thermal;

pub use analysis::{
    annotate_steps, critical_field, detect_plateaus, entanglement_onset, find_dip,
    ground_state_magnetization, largest_build_up, magnetization_jumps, open_chain_profile,
    xx_tilt_comparison, AnnotatedStep, BuildUp, Dip, OpenChainProfile, PairProfile, Plateau,
    PlateauReport, Step, StepSign, TiltSummary,
};
pub use entanglement::{
    concurrence, reduce_to_pair, ConcurrenceValue, StateDiagnostics, TwoQubitState,
};
pub use error::{Error, Result};
pub use hamiltonian::{
    bond_strength, build_exchange, build_hamiltonian, Boundary, ChainSpec, Model, Pair, PairKind,
};
pub use hilbert::{
    build_sector_table, single_site_pauli, two_site_coupling, Axis, BasisIndex, SectorTable,
    MAX_SITES,
};
pub use matrix::Matrix;
pub use pipeline::{pair_concurrence, PreparedChain, Strategy};
pub use spectral::{decompose, decompose_sectored, SpectralDecomposition};
pub use sweep::{run_sweep, GridAxis, SweepGrid, SweepParam, SweepRequest};
pub use symmetry::{decompose_symmetric, find_symmetries, Involution, SymmetryGroup};
pub use thermal::{
    gibbs_weights, ground_state_weights, thermal_expectation, thermal_expectation_diagonal,
    thermal_weights, GibbsWeights,
};
