//! One-step maps of the Galerkin system.
//!
//! The stiff term is implicit with the non-local coefficient frozen at the
//! current state; reaction, forcing and noise are explicit (Itô left point).

use crate::error::{Error, Result};
use crate::model::{Model, Regime};
use crate::scalar::Scalar;
use crate::spectral::SpectralState;

pub(crate) fn check_dt<T: Scalar>(dt: T) -> Result<()> {
    if dt > T::zero() && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfiguration(format!("time step must be positive, got {dt}")))
    }
}

/// Left-point quantities entering one step and its energy balance.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct StepTerms<T> {
    pub a: T,
    pub v_sq: T,
    pub f: SpectralState<T>,
    pub h: Vec<T>,
    /// Projected noise coefficients; empty in deterministic mode.
    pub sigma: Vec<T>,
}

impl<T: Scalar> StepTerms<T> {
    pub fn at(model: &Model<T>, state: &SpectralState<T>, t: T) -> Result<Self> {
        let a_v = model.basis().sobolev_norms(state).v_sq;
        let sigma = match model.regime() {
            Regime::Stochastic => model.noise_modes(state)?.into_coeffs(),
            Regime::DeterministicRandom => Vec::new(),
        };
        Ok(Self {
            a: model.nonlocal_coefficient(a_v),
            v_sq: a_v,
            f: model.reaction_modes(state)?,
            h: model.forcing_modes(t),
            sigma,
        })
    }

    pub fn advance(&self, model: &Model<T>, state: &SpectralState<T>, dt: T, dw: T) -> SpectralState<T> {
        let out = state
            .coeffs()
            .iter()
            .zip(model.basis().eigenvalues())
            .zip(self.f.coeffs().iter().zip(&self.h))
            .enumerate()
            .map(|(j, ((&g, &l), (&fj, &hj)))| {
                let mut num = g + dt * (fj + hj);
                if let Some(&s) = self.sigma.get(j) {
                    num = num + s * dw;
                }
                num / (T::one() + dt * self.a * l)
            })
            .collect();
        SpectralState::new(out)
    }

    /// `‖u'‖² - ‖u‖² + 2dt a‖u‖_V² - 2dt(F + h, u) - dt‖σ‖² - 2(σ, u)dW`.
    pub fn energy_residual(&self, state: &SpectralState<T>, next: &SpectralState<T>, dt: T, dw: T) -> T {
        let two = T::lit(2.0);
        let u = state.coeffs();
        let drive: T = self
            .f
            .coeffs()
            .iter()
            .zip(&self.h)
            .zip(u)
            .map(|((&f, &h), &g)| (f + h) * g)
            .sum();
        let sigma_sq: T = self.sigma.iter().map(|&s| s * s).sum();
        let sigma_u: T = self.sigma.iter().zip(u).map(|(&s, &g)| s * g).sum();
        next.norm_sq() - state.norm_sq() + two * dt * self.a * self.v_sq - two * dt * drive - dt * sigma_sq - two * sigma_u * dw
    }
}

/// `γ_j' = (γ_j + dt(F_j + h_j)) / (1 + dt a(‖u‖_V²) λ_j)`.
pub fn step_deterministic<T: Scalar>(model: &Model<T>, state: &SpectralState<T>, t: T, dt: T) -> Result<SpectralState<T>> {
    model.require_deterministic("deterministic step")?;
    check_dt(dt)?;
    Ok(StepTerms::at(model, state, t)?.advance(model, state, dt, T::zero()))
}

/// Euler–Maruyama with semi-implicit drift:
/// `γ_j' = (γ_j + dt(F_j + h_j) + σ_j dW) / (1 + dt a(‖u‖_V²) λ_j)`.
pub fn step_stochastic<T: Scalar>(
    model: &Model<T>,
    state: &SpectralState<T>,
    t: T,
    dt: T,
    dw: T,
) -> Result<SpectralState<T>> {
    model.require_stochastic("stochastic step")?;
    check_dt(dt)?;
    Ok(StepTerms::at(model, state, t)?.advance(model, state, dt, dw))
}
