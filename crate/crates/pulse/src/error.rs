use qcr_lambda::LambdaError;
use qcr_spaces::SpaceError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PulseError {
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),
    #[error("invalid amplitude: {0}")]
    InvalidAmplitude(String),
    #[error("V² has eigenvalue {value:e} below −1e-8·‖V²‖ = {bound:e}; reduced model inconsistent")]
    NegativeSpectrum { value: f64, bound: f64 },
    #[error("state dimension {got} does not match operator dimension {expected}")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Lambda(#[from] LambdaError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}
