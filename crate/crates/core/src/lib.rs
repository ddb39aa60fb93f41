//! Spectral-Galerkin laboratory for non-local reaction-diffusion equations
//! `u_t - a(‖u‖_V²)Δu = f(u) + h(t) (+ σ(u)ẇ)` on `(0, L)` with Dirichlet
//! boundary conditions.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.

pub mod ensemble;
pub mod error;
pub mod integrate;
pub mod lab;
pub mod model;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Basis64 = spectral::Basis<f64>;
pub type State64 = spectral::SpectralState<f64>;
pub type Model64 = model::Model<f64>;
pub type Params64 = model::ModelParams<f64>;
pub type Trajectory64 = integrate::Trajectory<f64>;
pub type Family64 = ensemble::FamilySpec<f64>;
pub type EnsembleResult64 = ensemble::EnsembleResult<f64>;
pub type Constants64 = lab::DerivedConstants<f64>;
pub type Report64 = lab::BoundReport<f64>;
