//! Model parameters, Nemytskii evaluation and the Galerkin vector field.

mod forcing;
mod nonlocal;
mod noise;
mod operators;
mod reaction;
mod validate;

pub use forcing::Forcing;
pub use noise::Noise;
pub use nonlocal::NonlocalCoefficient;
pub use operators::{HemicontinuityProbe, OperatorProbe};
pub use reaction::{CustomReaction, DeclaredConstants, DissipationConstants, GrowthConstants, Reaction};
pub use validate::{validate_params, AssumptionCheck, CheckStatus, ValidationReport};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::{Basis, GridFunction, SpectralState};

/// Which of the two problems is being modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Deterministic dynamics, randomness only in the initial data.
    DeterministicRandom,
    /// Itô multiplicative noise driven by a scalar Wiener process.
    Stochastic,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Self::DeterministicRandom => "deterministic",
            Self::Stochastic => "stochastic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModelParams<T> {
    pub regime: Regime,
    pub nonlocal: NonlocalCoefficient<T>,
    pub reaction: Reaction<T>,
    pub declared: DeclaredConstants<T>,
    pub noise: Noise<T>,
    pub forcing: Forcing<T>,
    /// Exponential weight of the universe: `μ` (deterministic) or `ω₀` (stochastic).
    pub rate: T,
}

impl<T: Scalar> ModelParams<T> {
    /// Effective dissipation constants and whether any of them were declared.
    pub fn dissipation_constants(&self) -> Option<(DissipationConstants<T>, bool)> {
        let d = &self.declared;
        let base = self.reaction.certified_dissipation();
        if base.is_none() && !d.touches_dissipation() {
            return None;
        }
        let nan = T::nan();
        let b = base.unwrap_or(DissipationConstants {
            alpha: nan,
            beta: nan,
            gamma: nan,
            delta: nan,
            eta: nan,
            p: nan,
        });
        Some((
            DissipationConstants {
                alpha: d.alpha.unwrap_or(b.alpha),
                beta: d.beta.unwrap_or(b.beta),
                gamma: d.gamma.unwrap_or(b.gamma),
                delta: d.delta.unwrap_or(b.delta),
                eta: d.eta.unwrap_or(b.eta),
                p: d.p.unwrap_or(b.p),
            },
            d.touches_dissipation(),
        ))
    }

    /// Effective linear-growth constants and whether any of them were declared.
    pub fn growth_constants(&self) -> Option<(GrowthConstants<T>, bool)> {
        let d = &self.declared;
        let base = self.reaction.certified_growth();
        if base.is_none() && !d.touches_growth() {
            return None;
        }
        let nan = T::nan();
        let b = base.unwrap_or(GrowthConstants {
            gamma1: nan,
            gamma2: None,
            gamma3: nan,
            gamma4: nan,
        });
        Some((
            GrowthConstants {
                gamma1: d.gamma1.unwrap_or(b.gamma1),
                gamma2: d.gamma2.or(b.gamma2),
                gamma3: d.gamma3.unwrap_or(b.gamma3),
                gamma4: d.gamma4.unwrap_or(b.gamma4),
            },
            d.touches_growth(),
        ))
    }
}

/// A basis paired with model parameters: the Galerkin system.
#[derive(Debug, Clone)]
pub struct Model<T> {
    basis: Basis<T>,
    params: ModelParams<T>,
}

impl<T: Scalar> Model<T> {
    /// Pairs a basis with parameters after structural checks. The analytic
    /// hypotheses are not enforced here; see [`validate_params`].
    pub fn new(basis: Basis<T>, params: ModelParams<T>) -> Result<Self> {
        let (m, big_m) = (params.nonlocal.lower(), params.nonlocal.upper());
        if !(m > T::zero()) || !(m <= big_m) || !big_m.is_finite() {
            return Err(Error::InvalidConfiguration(format!(
                "coefficient bounds must satisfy 0 < m <= M, got m = {m}, M = {big_m}"
            )));
        }
        if let Reaction::Cubic { kappa, .. } = params.reaction {
            if !(kappa > T::zero()) {
                return Err(Error::InvalidConfiguration(format!(
                    "cubic reaction needs kappa > 0, got {kappa}"
                )));
            }
        }
        if let Some(p) = params.declared.p {
            if p < T::lit(2.0) {
                return Err(Error::InvalidConfiguration(format!("exponent p must be >= 2, got {p}")));
            }
        }
        params.forcing.check_shape()?;
        if params.forcing.mode_len() > basis.modes() {
            return Err(Error::Dimension {
                expected: basis.modes(),
                found: params.forcing.mode_len(),
            });
        }
        if !params.rate.is_finite() {
            return Err(Error::InvalidConfiguration("rate must be finite".into()));
        }
        Ok(Self { basis, params })
    }

    pub fn basis(&self) -> &Basis<T> {
        &self.basis
    }

    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    pub fn regime(&self) -> Regime {
        self.params.regime
    }

    pub fn modes(&self) -> usize {
        self.basis.modes()
    }

    /// `|𝒪| = L`
    pub fn domain_measure(&self) -> T {
        self.basis.length()
    }

    /// `a(‖u‖_V²)` given `v_sq = ‖u‖_V²`.
    pub fn nonlocal_coefficient(&self, v_sq: T) -> T {
        self.params.nonlocal.value(v_sq)
    }

    /// Pointwise application of `f` on the grid.
    pub fn nemytskii_reaction(&self, g: &GridFunction<T>) -> GridFunction<T> {
        g.map(|r| self.params.reaction.value(r))
    }

    /// Pointwise application of `σ` on the grid.
    pub fn nemytskii_noise(&self, g: &GridFunction<T>) -> GridFunction<T> {
        g.map(|r| self.params.noise.value(r))
    }

    /// Mode coefficients of `f̃(u)`.
    pub fn reaction_modes(&self, state: &SpectralState<T>) -> Result<SpectralState<T>> {
        let g = self.basis.synthesize(state)?;
        self.basis.analyze(&self.nemytskii_reaction(&g))
    }

    pub fn forcing_modes(&self, t: T) -> Vec<T> {
        self.params.forcing.modes_at(t, self.modes())
    }

    /// Galerkin vector field
    /// `-a(‖u‖_V²) λ_j γ_j + (f(u), e_j) + (h(t), e_j)`.
    pub fn drift(&self, state: &SpectralState<T>, t: T) -> Result<Vec<T>> {
        let f = self.reaction_modes(state)?;
        let a = self.nonlocal_coefficient(self.basis.sobolev_norms(state).v_sq);
        let h = self.forcing_modes(t);
        Ok(state
            .coeffs()
            .iter()
            .zip(self.basis.eigenvalues())
            .zip(f.coeffs().iter().zip(&h))
            .map(|((&g, &l), (&fj, &hj))| -a * l * g + fj + hj)
            .collect())
    }

    pub fn require_stochastic(&self, what: &'static str) -> Result<()> {
        match self.regime() {
            Regime::Stochastic => Ok(()),
            r => Err(Error::Mode { regime: r.name(), what }),
        }
    }

    pub fn require_deterministic(&self, what: &'static str) -> Result<()> {
        match self.regime() {
            Regime::DeterministicRandom => Ok(()),
            r => Err(Error::Mode { regime: r.name(), what }),
        }
    }

    /// Mode coefficients of `σ̃(u)`.
    pub fn diffusion(&self, state: &SpectralState<T>) -> Result<Vec<T>> {
        self.require_stochastic("diffusion")?;
        Ok(self.noise_modes(state)?.into_coeffs())
    }

    pub(crate) fn noise_modes(&self, state: &SpectralState<T>) -> Result<SpectralState<T>> {
        if self.params.noise.is_zero() {
            return Ok(SpectralState::zeros(self.modes()));
        }
        let g = self.basis.synthesize(state)?;
        self.basis.analyze(&self.nemytskii_noise(&g))
    }
}
