//! Truncated Hilbert spaces for atoms in a two-mode cavity and the dense
//! operator algebra used by the rest of the workspace.
//!
//! Everything is generic over the scalar ([`Real`]: `f32` or `f64`); the
//! aliases at the bottom fix the scalar to `f64`.

pub mod basis;
pub mod error;
pub mod ladder;
pub mod modes;
pub mod operator;
pub mod scalar;
pub mod spatial;
pub mod state;

pub use basis::{BasisLabel, CompositeBasis, FieldKind, Subsystem};
pub use error::SpaceError;
pub use ladder::{build_annihilation, build_creation, build_number, PhotonLadder, PhotonMode};
pub use modes::{AtomicModeSet, HarmonicTrap, LevelModes};
pub use operator::{sinc, OperatorMatrix, SparseRows, SpectralFn, Spectrum};
pub use scalar::Real;
pub use spatial::{Grid, SpatialBackend, SpatialFunction};
pub use state::StateVector;

pub use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type Operator = OperatorMatrix<f64>;
pub type State = StateVector<f64>;
pub type Basis = CompositeBasis<f64>;
pub type ModeSet = AtomicModeSet<f64>;
pub type Function = SpatialFunction<f64>;
