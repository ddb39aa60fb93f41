use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("operation not available in {regime} mode: {what}")]
    Mode { regime: &'static str, what: &'static str },

    #[error("blow-up at step {step} (t = {time}): ||u||^2 = {h_sq}")]
    BlowUp { step: usize, time: f64, h_sq: f64 },

    #[error("path {path_id} failed: {source}")]
    Path {
        path_id: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("{what} = {value} outside the admissible interval ({lo}, {hi})")]
    Range {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("forcing is not integrable at rate {rate}: {reason}")]
    Integrability { rate: f64, reason: String },

    #[error("family is not in the universe: {0}")]
    Universe(String),

    #[error("fixed-point iteration stalled after {iterations} iterations (residual {residual})")]
    NonConvergence { iterations: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
