use std::path::PathBuf;

use thiserror::Error;

use biostego_core::listega::ListegaError;
use biostego_core::matching::MatchError;
use biostego_core::minutiae::TemplateError;
use biostego_core::pipeline::PipelineError;
use biostego_core::raster::RasterError;
use biostego_core::stego::StegoError;
use biostego_core::store::StoreError;

/// Command failures mapped onto the exit-code contract:
/// 1 rejected, 2 usage/not-found, 3 data errors.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("authentication failed for user {user:?} (score {score})")]
    AuthenticationFailed { user: String, score: u32 },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Data(String),
    #[error("{context}: {source}")]
    Io { context: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::AuthenticationFailed { .. } => 1,
            CliError::Usage(_) | CliError::NotFound(_) => 2,
            CliError::Data(_) | CliError::Io { .. } => 3,
        }
    }
}

impl From<RasterError> for CliError {
    fn from(e: RasterError) -> Self {
        match e {
            RasterError::MissingFile(_) => CliError::NotFound(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::UnknownUser(_) => CliError::NotFound(e.to_string()),
            StoreError::UserExists(_) | StoreError::InvalidUserId(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<StegoError> for CliError {
    fn from(e: StegoError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ListegaError> for CliError {
    fn from(e: ListegaError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<TemplateError> for CliError {
    fn from(e: TemplateError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<MatchError> for CliError {
    fn from(e: MatchError) -> Self {
        CliError::Data(e.to_string())
    }
}
