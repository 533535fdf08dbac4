//! Delta-pulse evolution of the reduced Rabi-block Hamiltonian.

pub mod blocks;
pub mod com;
pub mod error;
pub mod propagator;
pub mod reduced;
pub mod spec;

pub use blocks::{components, BlockSpectrum};
pub use com::{gaussian_com_energy, phase_factor_c, GaussianAmplitude};
pub use error::PulseError;
pub use propagator::{delta_pulse_u, rabi_operator, PulsePropagator};
pub use reduced::{build_v, effective_frequencies, DroppedTerm, JointOperators, ReducedHamiltonian, VSquared};
pub use spec::PulseSpec;

pub type Pulse = PulseSpec<f64>;
pub type Reduced = ReducedHamiltonian<f64>;
pub type Propagator = PulsePropagator<f64>;
pub type Gaussian = GaussianAmplitude<f64>;
