use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] betadet_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("verification failed: {0}")]
    VerifyFailed(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    /// 1 verification failure, 2 usage or I/O, 3 numerical domain.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::VerifyFailed(_) => 1,
            Self::Usage(_) | Self::Io(_) | Self::Csv(_) | Self::Json(_) => 2,
            Self::Core(_) => 3,
        }
    }

    pub fn to_exit(&self) -> ExitCode {
        ExitCode::from(self.exit_code())
    }
}
