//! Autonomous steady states and the continuous-dependence bound.

use super::report::BoundReport;
use crate::error::{Error, Result};
use crate::integrate::simulate_path;
use crate::model::Model;
use crate::scalar::Scalar;
use crate::spectral::SpectralState;

/// Iterations without residual decrease before giving up.
pub const STALL_LIMIT: usize = 10_000;
const ITERATION_LIMIT: usize = 1_000_000;

/// `‖drift(z)‖_H` for autonomous forcing.
pub fn steady_residual<T: Scalar>(model: &Model<T>, z: &SpectralState<T>) -> Result<T> {
    Ok(model.drift(z, T::zero())?.iter().map(|&x| x * x).sum::<T>().sqrt())
}

/// Steady state to residual `1e-10`; see [`steady_state_with`].
pub fn steady_state<T: Scalar>(model: &Model<T>) -> Result<SpectralState<T>> {
    steady_state_with(model, T::lit(1e-10))
}

/// Zero of the drift by the damped iteration
/// `γ ← (1-θ)γ + θ a(‖γ‖_V²)⁻¹ Λ⁻¹ (F(γ) + h₀)`, where `θ` grows after a
/// residual decrease and halves otherwise.
pub fn steady_state_with<T: Scalar>(model: &Model<T>, tol: T) -> Result<SpectralState<T>> {
    model.require_deterministic("steady state")?;
    let forcing = &model.params().forcing;
    if !forcing.is_autonomous() {
        return Err(Error::InvalidConfiguration(format!(
            "steady states need time-independent forcing, got {}",
            forcing.name()
        )));
    }
    let basis = model.basis();
    let h0 = model.forcing_modes(T::zero());
    let picard = |g: &SpectralState<T>| -> Result<SpectralState<T>> {
        let a = model.nonlocal_coefficient(basis.sobolev_norms(g).v_sq);
        let f = model.reaction_modes(g)?;
        Ok(SpectralState::new(
            f.coeffs()
                .iter()
                .zip(&h0)
                .zip(basis.eigenvalues())
                .map(|((&fj, &hj), &l)| (fj + hj) / (a * l))
                .collect(),
        ))
    };

    let mut z = SpectralState::zeros(model.modes());
    let mut res = steady_residual(model, &z)?;
    let mut theta = T::one();
    let mut stalled = 0;
    for _ in 0..ITERATION_LIMIT {
        if res <= tol {
            return Ok(z);
        }
        let target = picard(&z)?;
        let cand = z.add_scaled(&target.sub(&z), theta);
        let r = steady_residual(model, &cand)?;
        if r < res {
            z = cand;
            res = r;
            theta = (theta * T::lit(1.5)).min(T::one());
            stalled = 0;
        } else {
            theta = theta * T::lit(0.5);
            stalled += 1;
            if stalled >= STALL_LIMIT {
                return Err(Error::NonConvergence {
                    iterations: stalled,
                    residual: res.as_f64(),
                });
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: ITERATION_LIMIT,
        residual: res.as_f64(),
    })
}

/// `‖u(t) - v(t)‖²` against `e^{2η(t-τ)}‖u₀ - v₀‖²` on a shared grid, with
/// an allowance of `dt` times the bound.
pub fn continuity_gap<T: Scalar>(
    model: &Model<T>,
    u0: &SpectralState<T>,
    v0: &SpectralState<T>,
    tau: T,
    end: T,
    dt: T,
) -> Result<BoundReport<T>> {
    model.require_deterministic("continuity gap")?;
    let (d, _) = model.params().dissipation_constants().ok_or_else(|| {
        Error::InvalidConfiguration(format!("no derivative bound for reaction {}", model.params().reaction.name()))
    })?;
    let u = simulate_path(model, u0, tau, end, dt, None)?;
    let v = simulate_path(model, v0, tau, end, dt, None)?;
    let d0 = u0.sub(v0).norm_sq();
    let two = T::lit(2.0);
    let bound: Vec<T> = u.times.iter().map(|&t| (two * d.eta * (t - tau)).exp() * d0).collect();
    let measured = u.states.iter().zip(&v.states).map(|(a, b)| a.sub(b).norm_sq()).collect();
    let allowance = bound.iter().map(|&b| dt * b).collect();
    Ok(BoundReport::new(u.times, bound, measured, allowance))
}
