//! Single-particle Raman diffraction, the beam-splitter operator and the
//! two-particle Hong-Ou-Mandel scenario, plus parallel parameter sweeps.

pub mod beam_splitter;
pub mod error;
pub mod hom;
pub mod inputs;
pub mod result;
pub mod setup;
pub mod single;
pub mod sweep;

pub use beam_splitter::{BeamSplitter, SectorBlock};
pub use error::ScenarioError;
pub use hom::{hom_frequency, prepare_hom, run_hom};
pub use inputs::{AtomicInput, Expansion, OpticalInput, PairInput};
pub use result::{PhaseKind, PhaseRecord, Population, PreparedRun, PulseResult, Summary};
pub use setup::{Ancilla, Internal, RamanSetup};
pub use single::{prepare_single, run_single_particle};
pub use sweep::{sweep, thread_pool, Scenario, SweepParameter, SweepRow};

pub type Setup = RamanSetup<f64>;
pub type Result64 = PulseResult<f64>;
