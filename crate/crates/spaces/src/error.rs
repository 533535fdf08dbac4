use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("photon cutoff must be at least 1, got {0}")]
    Cutoff(usize),
    #[error("max_atoms must be 0, 1 or 2, got {0}")]
    MaxAtoms(usize),
    #[error("atom-number sector {0} outside 0..=max_atoms")]
    Sector(usize),
    #[error("unknown atomic mode (level {level}, mode {mode})")]
    UnknownMode { level: usize, mode: usize },
    #[error("unknown level {0}")]
    UnknownLevel(usize),
    #[error("duplicate momentum label {label} on level {level}")]
    DuplicateMomentum { level: usize, label: i64 },
    #[error("mode profiles on level {level} are not orthonormal (defect {defect:e})")]
    NotOrthonormal { level: usize, defect: f64 },
    #[error("operator is not hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("not supported by the {backend} backend: {what}")]
    Backend { backend: &'static str, what: String },
    #[error("zero-norm state cannot be normalized")]
    ZeroNorm,
    #[error("invalid grid: {0}")]
    Grid(String),
}
