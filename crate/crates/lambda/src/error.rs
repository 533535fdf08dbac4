use qcr_averaging::AveragingError;
use qcr_spaces::SpaceError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LambdaError {
    #[error("level scheme: {0}")]
    Scheme(String),
    #[error("coupling set: {0}")]
    Coupling(String),
    #[error("singular detuning for {0}")]
    SingularDetuning(String),
    #[error("ancilla index {index} out of range ({count} ancillas)")]
    UnknownAncilla { index: usize, count: usize },
    #[error("ancilla coupling needs j != k (got {0})")]
    SameAncilla(usize),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Averaging(#[from] AveragingError),
}
