//! Reaction term `f` with machine-checked structural constants.
//!
//! Every preset carries closed-form constants for the two families of
//! hypotheses used by the estimates:
//!
//! * [`DissipationConstants`]: `f(r)r ≤ -α|r|^p + β`, `|f(r)| ≤ γ|r|^{p-1} + δ`,
//!   `f'(r) ≤ η`.
//! * [`GrowthConstants`]: `f'(r) ≤ γ₁`, `|f(r)| ≤ γ₂(1 + |r|)`,
//!   `f(r)r ≤ γ₃ + γ₄r²`.
//!
//! Constants may be overridden by [`DeclaredConstants`]; overridden values are
//! only ever checked by sampling.

use std::fmt;
use std::sync::Arc;

use crate::scalar::Scalar;

type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// User-supplied reaction term. Nothing is certified for it.
#[derive(Clone)]
pub struct CustomReaction<T> {
    pub name: String,
    pub value: ScalarFn<T>,
    pub derivative: ScalarFn<T>,
}

impl<T> fmt::Debug for CustomReaction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomReaction")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum Reaction<T> {
    /// `f(r) = slope · r`
    Linear { slope: T },
    /// `f(r) = eta · r - kappa · r³`, `kappa > 0`
    Cubic { eta: T, kappa: T },
    /// `f(r) = gain · tanh r`
    Tanh { gain: T },
    Custom(CustomReaction<T>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationConstants<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
    pub eta: T,
    pub p: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthConstants<T> {
    pub gamma1: T,
    /// `None` when `f` grows faster than linearly.
    pub gamma2: Option<T>,
    pub gamma3: T,
    pub gamma4: T,
}

/// Optional user overrides of the structural constants.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DeclaredConstants<T> {
    pub alpha: Option<T>,
    pub beta: Option<T>,
    pub gamma: Option<T>,
    pub delta: Option<T>,
    pub eta: Option<T>,
    pub p: Option<T>,
    pub gamma1: Option<T>,
    pub gamma2: Option<T>,
    pub gamma3: Option<T>,
    pub gamma4: Option<T>,
}

impl<T: Scalar> DeclaredConstants<T> {
    pub fn none() -> Self {
        Self {
            alpha: None,
            beta: None,
            gamma: None,
            delta: None,
            eta: None,
            p: None,
            gamma1: None,
            gamma2: None,
            gamma3: None,
            gamma4: None,
        }
    }

    pub fn touches_dissipation(&self) -> bool {
        self.alpha.is_some()
            || self.beta.is_some()
            || self.gamma.is_some()
            || self.delta.is_some()
            || self.eta.is_some()
            || self.p.is_some()
    }

    pub fn touches_growth(&self) -> bool {
        self.gamma1.is_some() || self.gamma2.is_some() || self.gamma3.is_some() || self.gamma4.is_some()
    }
}

fn pos<T: Scalar>(x: T) -> T {
    x.max(T::zero())
}

impl<T: Scalar> Reaction<T> {
    pub fn value(&self, r: T) -> T {
        match self {
            Self::Linear { slope } => *slope * r,
            Self::Cubic { eta, kappa } => *eta * r - *kappa * r * r * r,
            Self::Tanh { gain } => *gain * r.tanh(),
            Self::Custom(c) => (c.value)(r),
        }
    }

    pub fn derivative(&self, r: T) -> T {
        match self {
            Self::Linear { slope } => *slope,
            Self::Cubic { eta, kappa } => *eta - T::lit(3.0) * *kappa * r * r,
            Self::Tanh { gain } => {
                let c = r.cosh();
                *gain / (c * c)
            }
            Self::Custom(c) => (c.derivative)(r),
        }
    }

    /// Bound on `|f'|` over `[-radius, radius]`.
    pub fn local_lipschitz(&self, radius: T) -> T {
        match self {
            Self::Linear { slope } => slope.abs(),
            Self::Cubic { eta, kappa } => eta.abs() + T::lit(3.0) * kappa.abs() * radius * radius,
            Self::Tanh { gain } => gain.abs(),
            Self::Custom(c) => {
                // sampled; custom terms carry no certificate
                let n = 2001;
                (0..n)
                    .map(|i| {
                        let r = -radius + T::lit(2.0) * radius * T::count(i) / T::count(n - 1);
                        (c.derivative)(r).abs()
                    })
                    .fold(T::zero(), T::max)
            }
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::Linear { .. } => "linear",
            Self::Cubic { .. } => "cubic",
            Self::Tanh { .. } => "tanh",
            Self::Custom(c) => &c.name,
        }
    }

    pub fn is_custom(&self) -> bool {
        matches!(self, Self::Custom(_))
    }

    /// Closed-form constants for `f(r)r ≤ -α|r|^p + β` and companions.
    /// A returned `alpha ≤ 0` means the preset is not dissipative.
    pub fn certified_dissipation(&self) -> Option<DissipationConstants<T>> {
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        match *self {
            Self::Linear { slope } => Some(DissipationConstants {
                alpha: -slope,
                beta: T::zero(),
                gamma: slope.abs(),
                delta: T::zero(),
                eta: pos(slope),
                p: two,
            }),
            Self::Cubic { eta, kappa } => {
                // eta x - (kappa/2) x² ≤ eta²/(2 kappa) for x = r² ≥ 0 and eta > 0;
                // |r| ≤ |r|³/3 + 2/3 by Young.
                let beta = if eta > T::zero() {
                    eta * eta / (two * kappa)
                } else {
                    T::zero()
                };
                Some(DissipationConstants {
                    alpha: kappa / two,
                    beta,
                    gamma: kappa + eta.abs() / three,
                    delta: two * eta.abs() / three,
                    eta: pos(eta),
                    p: T::lit(4.0),
                })
            }
            Self::Tanh { gain } => Some(DissipationConstants {
                // g tanh(r) r ≤ g|r| ≤ g/2 + g r²/2 for g > 0: no dissipation.
                alpha: -pos(gain) / two,
                beta: pos(gain) / two,
                gamma: T::zero(),
                delta: gain.abs(),
                eta: pos(gain),
                p: two,
            }),
            Self::Custom(_) => None,
        }
    }

    /// Closed-form constants for the linear-growth hypotheses.
    pub fn certified_growth(&self) -> Option<GrowthConstants<T>> {
        let two = T::lit(2.0);
        match *self {
            Self::Linear { slope } => Some(GrowthConstants {
                gamma1: pos(slope),
                gamma2: Some(slope.abs()),
                gamma3: T::zero(),
                gamma4: pos(slope),
            }),
            Self::Cubic { eta, kappa } => Some(GrowthConstants {
                gamma1: pos(eta),
                gamma2: None,
                // eta x - kappa x² ≤ eta²/(4 kappa)
                gamma3: if eta > T::zero() {
                    eta * eta / (T::lit(4.0) * kappa)
                } else {
                    T::zero()
                },
                gamma4: T::zero(),
            }),
            Self::Tanh { gain } => Some(GrowthConstants {
                gamma1: pos(gain),
                gamma2: Some(gain.abs()),
                gamma3: pos(gain) / two,
                gamma4: pos(gain) / two,
            }),
            Self::Custom(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_values() {
        assert_eq!(Reaction::Linear { slope: 0.5 }.value(2.0), 1.0);
        assert_eq!(Reaction::Cubic { eta: 1.0, kappa: 1.0 }.value(2.0), -6.0);
        assert!((Reaction::Tanh { gain: 2.0 }.value(0.5) - 2.0 * 0.5f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let presets = [
            Reaction::Linear { slope: -0.7f64 },
            Reaction::Cubic { eta: 1.5, kappa: 0.3 },
            Reaction::Tanh { gain: 0.8 },
        ];
        let h = 1e-6;
        for f in &presets {
            for &r in &[-3.0, -0.4, 0.0, 0.9, 2.5] {
                let fd = (f.value(r + h) - f.value(r - h)) / (2.0 * h);
                assert!((fd - f.derivative(r)).abs() < 1e-7, "{} at {r}", f.name());
            }
        }
    }

    #[test]
    fn cubic_certificate_values() {
        let c = Reaction::Cubic { eta: 1.0, kappa: 1.0 }
            .certified_dissipation()
            .unwrap();
        assert_eq!((c.alpha, c.beta, c.p), (0.5, 0.5, 4.0));
        let g = Reaction::Cubic { eta: 1.0, kappa: 1.0 }.certified_growth().unwrap();
        assert_eq!(g.gamma2, None);
        assert_eq!(g.gamma3, 0.25);
    }
}
