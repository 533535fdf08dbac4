//! The multi-Λ atom-photon model: level scheme, couplings and detunings,
//! energy shifts and couplings of the effective Hamiltonian, and its
//! cross-check against the generic averaging engine.

pub mod commutators;
pub mod effective;
pub mod error;
pub mod model;
pub mod scheme;
pub mod shifts;

pub use commutators::{commutator, evaluate_commutators, CommutatorTerm};
pub use effective::{
    assemble_h_eff, below_photon_edge, engine_effective_hamiltonian, heisenberg_rhs, restore_schroedinger,
    EffectiveHamiltonian, Provenance,
};
pub use error::LambdaError;
pub use qcr_averaging::HcSign;
pub use model::{build_dipole_hamiltonian, to_interaction_picture, LambdaModel};
pub use scheme::{ancilla_level, relevant_level, CouplingSet, DetuningTable, LevelScheme, LEVEL_A, LEVEL_B};
pub use shifts::{
    ac_stark, ac_stark_j, ancilla_coupling, bloch_siegert, bloch_siegert_j, pair_self_coupling, rabi_coupling,
    self_couplings, self_couplings_direct, Branch, Density, SelfCouplings, ShiftPair,
};

pub type Model = LambdaModel<f64>;
pub type Couplings = CouplingSet<f64>;
pub type Levels = LevelScheme<f64>;
pub type Heff = EffectiveHamiltonian<f64>;
