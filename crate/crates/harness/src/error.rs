//! Harness-level errors.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("world setup failed: {0}")]
    Setup(#[from] forage_core::SetupError),
    #[error("simulation error: {0}")]
    Sim(#[from] forage_core::SimError),
    #[error("strategy error: {0}")]
    Strategy(#[from] forage_core::StrategyError),
    #[error("trace parse error at line {line}: {message}")]
    TraceParse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
