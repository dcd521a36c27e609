use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config error: {0}")]
    Config(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("fit: {0}")]
    Fit(String),
    #[error(transparent)]
    Core(lifshitz_core::Error),
}

impl LabError {
    /// Process exit code: 2 for configuration problems, 3 for budgets.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => 2,
            LabError::Budget(_) => 3,
            _ => 1,
        }
    }
}

impl From<lifshitz_core::Error> for LabError {
    fn from(e: lifshitz_core::Error) -> Self {
        use lifshitz_core::Error as E;
        match e {
            E::Budget { .. } | E::AllCensored => LabError::Budget(e.to_string()),
            E::InvalidArgument(_) | E::InvalidDomain(_) | E::Dimension(_) | E::InvalidDimerSpec(_) | E::EmptyDomain => LabError::Config(e.to_string()),
            other => LabError::Core(other),
        }
    }
}

pub type LabResult<T> = std::result::Result<T, LabError>;
