use dirichlet_core::atlas::{AtlasError, ProbeError, RuleError};
use dirichlet_core::bohr::BohrError;
use dirichlet_core::config::ConfigError;
use dirichlet_core::lifting::LiftError;
use dirichlet_core::models::ModelError;
use dirichlet_core::series::SeriesError;
use dirichlet_core::zeros::ZeroError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numeric(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<BohrError> for CliError {
    fn from(e: BohrError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::AccuracyWindowExceeded { .. }
            | ModelError::NotNormalized
            | ModelError::InvalidCharacter(_)
            | ModelError::PoleAt1 => CliError::Validation(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<ZeroError> for CliError {
    fn from(e: ZeroError) -> Self {
        match e {
            ZeroError::Model(m) => m.into(),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<LiftError> for CliError {
    fn from(e: LiftError) -> Self {
        match e {
            LiftError::SeedMismatch { .. } => CliError::Validation(e.to_string()),
            LiftError::Model(m) => m.into(),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<AtlasError> for CliError {
    fn from(e: AtlasError) -> Self {
        match e {
            AtlasError::WindowTooSmall { .. } | AtlasError::NotNormalized => CliError::Validation(e.to_string()),
            AtlasError::Lift(l) => l.into(),
            AtlasError::Zeros(z) => z.into(),
            AtlasError::Model(m) => m.into(),
        }
    }
}

impl From<ProbeError> for CliError {
    fn from(e: ProbeError) -> Self {
        match e {
            ProbeError::Model(m) => m.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<RuleError> for CliError {
    fn from(e: RuleError) -> Self {
        match e {
            RuleError::Model(m) => m.into(),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Numeric(format!("serialization: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Numeric(format!("csv: {e}"))
    }
}
