use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read {0}: {1}")]
    Io(String, String),

    #[error("malformed configuration: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Invalid(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error(transparent)]
    Model(#[from] mdmg_core::Error),
}

pub type Result<T, E = ConfigError> = std::result::Result<T, E>;
