use qcr_averaging::AveragingError;
use qcr_lambda::LambdaError;
use qcr_scenarios::ScenarioError;
use qcr_spaces::SpaceError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("oracle: {0}")]
    Oracle(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Averaging(#[from] AveragingError),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema { path: path.into(), message: message.into() }
    }
}
