use qcr_spaces::SpaceError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AveragingError {
    #[error("singular detuning: {0}")]
    SingularDetuning(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("filter cutoff must be positive and the window width finite")]
    Filter,
    #[error("time grid must be strictly increasing")]
    TimeGrid,
    #[error("time grid is not uniform (spacing deviates by {0:e})")]
    NonUniform(f64),
    #[error("trace spans {span} but the filter window needs {needed}")]
    InsufficientData { span: f64, needed: f64 },
    #[error("step size underflow at t = {t} (h = {h:e}, {steps} accepted steps, last error ratio {err:e})")]
    Stiffness { t: f64, h: f64, steps: usize, err: f64 },
    #[error(transparent)]
    Space(#[from] SpaceError),
}
