use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("invalid prior: {0}")]
    InvalidPrior(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("simulation failed: {0}")]
    Simulation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
