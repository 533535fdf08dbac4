//! Operator time-averaging for harmonic Hamiltonians: frequency classification,
//! the second-order effective Hamiltonian and generator, low-pass filtering of
//! observables, and an adaptive exact-evolution oracle.

pub mod effective;
pub mod error;
pub mod evolve;
pub mod filter;
pub mod harmonic;

pub use effective::{
    effective_hamiltonian, inverse_detuning_sum, kept_pairs, second_order_generator, Combination,
    EffectiveTerms, GeneratorTerm, KeptPair, SecondOrderGenerator,
};
pub use error::AveragingError;
pub use evolve::{exact_evolve, exact_evolve_with, EvolveDiagnostics, EvolveOptions, Trajectory};
pub use filter::{averaged_observable, classify_frequency, filter_series, FilterSpec, Verdict, Window};
pub use harmonic::{Domain, HarmonicHamiltonian, HcSign, OscillatingTerm};

pub type Harmonic = HarmonicHamiltonian<f64>;
pub type Filter = FilterSpec<f64>;
