use qcr_lambda::LambdaError;
use qcr_pulse::PulseError;
use qcr_spaces::SpaceError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("two-particle input is not exchange symmetric (defect {0:e})")]
    NotSymmetric(f64),
    #[error("pulse/basis mismatch: {0}")]
    Mismatch(String),
    #[error("invalid sweep grid: {0}")]
    Grid(String),
    #[error(transparent)]
    Pulse(#[from] PulseError),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}
