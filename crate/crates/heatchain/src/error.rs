use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Model(#[from] heatchain_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot parse config: {0}")]
    ConfigParse(#[from] toml::de::Error),
    #[error("cannot write config: {0}")]
    ConfigWrite(#[from] toml::ser::Error),
    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, AppError>;

pub(crate) fn config_error(msg: impl Into<String>) -> AppError {
    AppError::Config(msg.into())
}
