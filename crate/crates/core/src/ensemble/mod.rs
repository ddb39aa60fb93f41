//! Monte Carlo estimation of second moments over initial-data families and
//! Brownian paths.

mod engine;
mod family;

pub use engine::{run_ensemble, EnsembleConfig, EnsembleResult, Estimate};
pub use family::{FamilyNorm, FamilySpec, RadiusProfile};
