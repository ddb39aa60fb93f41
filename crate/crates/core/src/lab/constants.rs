//! Explicit constants of the mean-square estimates and the bounds built
//! from them.
//!
//! Stochastic regime, with `X = mλ₁ - γ₄ - C_σ²`:
//! `ω₀ = 2(1-ε)X`, `K₁ = 2‖σ̃(0)‖² + 2γ₃|𝒪|`, `K₂ = 1/(2εX)`.
//!
//! Deterministic regime: `μ ∈ (0, 2mλ₁)`, `K₁ = 2β|𝒪|`, `K₂ = 1/(2mλ₁ - μ)`.
//!
//! In both cases `E‖u(t)‖² ≤ e^{-rate(t-τ)}E‖u_τ‖² + K₁/rate + K₂∫_τ^t e^{-rate(t-r)}‖h(r)‖² dr`.

use crate::error::{Error, Result};
use crate::model::{Model, Regime};
use crate::scalar::Scalar;

/// How the exponential rate is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateChoice<T> {
    /// Fraction `ε ∈ (0, 1)` of the dissipation spent on the forcing.
    Epsilon(T),
    /// The rate itself (`μ` or `ω₀`).
    Rate(T),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedConstants<T> {
    pub regime: Regime,
    pub epsilon: T,
    pub rate: T,
    pub k1: T,
    pub k2: T,
    /// Stochastic only: `ω₀ ≥ mλ₁ - γ₄ - C_σ²`, admissible but outside the
    /// conservative range.
    pub beyond_stated_range: bool,
    pub note: String,
}

fn range_err<T: Scalar>(what: &'static str, value: T, lo: T, hi: T) -> Error {
    Error::Range {
        what,
        value: value.as_f64(),
        lo: lo.as_f64(),
        hi: hi.as_f64(),
    }
}

/// Splits the available dissipation `scale` (`2X` or `2mλ₁`) into a rate and
/// the fraction `ε` left for the forcing.
fn split<T: Scalar>(choice: RateChoice<T>, scale: T, name: &'static str) -> Result<(T, T)> {
    match choice {
        RateChoice::Epsilon(eps) => {
            if !(eps > T::zero() && eps < T::one()) {
                return Err(range_err("epsilon", eps, T::zero(), T::one()));
            }
            Ok((eps, (T::one() - eps) * scale))
        }
        RateChoice::Rate(rate) => {
            if !(rate > T::zero() && rate < scale) {
                return Err(range_err(name, rate, T::zero(), scale));
            }
            Ok((T::one() - rate / scale, rate))
        }
    }
}

/// Constants of the mean-square decay estimate for the model's regime.
pub fn derive_constants<T: Scalar>(model: &Model<T>, choice: RateChoice<T>) -> Result<DerivedConstants<T>> {
    let p = model.params();
    let m = p.nonlocal.lower();
    let lambda1 = model.basis().first_eigenvalue();
    let measure = model.domain_measure();
    let two = T::lit(2.0);
    match p.regime {
        Regime::Stochastic => {
            let (g, _) = p.growth_constants().ok_or_else(|| {
                Error::InvalidConfiguration(format!("no growth constants for reaction {}", p.reaction.name()))
            })?;
            let c2 = p.noise.lipschitz() * p.noise.lipschitz();
            let x = m * lambda1 - g.gamma4 - c2;
            if !(x > T::zero()) {
                return Err(Error::InvalidConfiguration(format!(
                    "m lambda1 - gamma4 - C_sigma^2 = {x} must be positive"
                )));
            }
            let (eps, rate) = split(choice, two * x, "omega0")?;
            let beyond = rate >= x;
            Ok(DerivedConstants {
                regime: p.regime,
                epsilon: eps,
                rate,
                k1: two * p.noise.norm_at_zero_sq(measure) + two * g.gamma3 * measure,
                k2: T::one() / (two * eps * x),
                beyond_stated_range: beyond,
                note: if beyond {
                    format!("omega0 = {rate} is admissible but at or above m lambda1 - gamma4 - C_sigma^2 = {x}")
                } else {
                    format!("omega0 = 2(1 - eps)(m lambda1 - gamma4 - C_sigma^2), eps = {eps}")
                },
            })
        }
        Regime::DeterministicRandom => {
            let (d, _) = p.dissipation_constants().ok_or_else(|| {
                Error::InvalidConfiguration(format!("no dissipation constants for reaction {}", p.reaction.name()))
            })?;
            let scale = two * m * lambda1;
            let (eps, rate) = split(choice, scale, "mu")?;
            Ok(DerivedConstants {
                regime: p.regime,
                epsilon: eps,
                rate,
                k1: two * d.beta * measure,
                k2: T::one() / (scale - rate),
                beyond_stated_range: false,
                note: format!("mu = {rate} in (0, 2 m lambda1 = {scale})"),
            })
        }
    }
}

/// `1 + K₁/rate + K₂ e^{-rate·t} ∫_{-∞}^t e^{rate·r}‖h(r)‖² dr`.
pub fn absorbing_radius<T: Scalar>(t: T, model: &Model<T>, consts: &DerivedConstants<T>) -> Result<T> {
    let tail = model.params().forcing.discounted_tail(t, consts.rate)?;
    Ok(T::one() + consts.k1 / consts.rate + consts.k2 * tail)
}

/// Radius `R(τ)` of the absorbing family for random initial data.
pub fn absorbing_radius_random<T: Scalar>(tau: T, model: &Model<T>, consts: &DerivedConstants<T>) -> Result<T> {
    model.require_deterministic("absorbing radius for random data")?;
    absorbing_radius(tau, model, consts)
}

/// Radius `R₀(t)` of the mean-square absorbing ball.
pub fn absorbing_radius_stochastic<T: Scalar>(t: T, model: &Model<T>, consts: &DerivedConstants<T>) -> Result<T> {
    model.require_stochastic("stochastic absorbing radius")?;
    absorbing_radius(t, model, consts)
}

/// `e^{-rate(t-τ)}E0 + K₁/rate + K₂∫_τ^t e^{-rate(t-r)}‖h(r)‖² dr`.
pub fn decay_bound<T: Scalar>(t: T, tau: T, e0: T, model: &Model<T>, consts: &DerivedConstants<T>) -> Result<T> {
    if t < tau {
        return Err(Error::InvalidConfiguration(format!("decay bound needs t >= tau, got t = {t}, tau = {tau}")));
    }
    let window = model.params().forcing.discounted_window(tau, t, consts.rate);
    Ok((-consts.rate * (t - tau)).exp() * e0 + consts.k1 / consts.rate + consts.k2 * window)
}

/// Deterministic bound on `‖u(t)‖_V²` for `τ + r ≤ t ≤ τ + horizon`:
/// `((2·horizon·K₁ + 2K₂ + ‖u_τ‖²)/(m r) + K₃) e^{2ηr}` with `K₁ = β|𝒪|`,
/// `K₂ = ∫‖h‖²/(2λ₁m)` and `K₃ = ∫‖h‖²/m` over `[τ, τ + horizon]`.
pub fn smoothing_bound<T: Scalar>(model: &Model<T>, u_tau_sq: T, tau: T, horizon: T, r: T) -> Result<T> {
    model.require_deterministic("smoothing bound")?;
    if !(r > T::zero() && r <= horizon) {
        return Err(range_err("r", r, T::zero(), horizon));
    }
    let p = model.params();
    let (d, _) = p.dissipation_constants().ok_or_else(|| {
        Error::InvalidConfiguration(format!("no dissipation constants for reaction {}", p.reaction.name()))
    })?;
    let m = p.nonlocal.lower();
    let two = T::lit(2.0);
    let h_int = p.forcing.discounted_window(tau, tau + horizon, T::zero());
    let k1 = d.beta * model.domain_measure();
    let k2 = h_int / (two * model.basis().first_eigenvalue() * m);
    let k3 = h_int / m;
    Ok(((two * horizon * k1 + two * k2 + u_tau_sq) / (m * r) + k3) * (two * d.eta * r).exp())
}
