//! Initial-data families and their universe membership.

use crate::error::{Error, Result};
use crate::integrate::{CounterStream, StreamPurpose};
use crate::scalar::Scalar;
use crate::spectral::SpectralState;

/// `ρ(τ)²` as a closed form in `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusProfile<T> {
    /// `ρ² = radius²`
    Constant { radius: T },
    /// `ρ² = base + slope·|τ|`
    AffineAbs { base: T, slope: T },
    /// `ρ² = r0²·e^{growth·|τ|}`
    Exponential { r0: T, growth: T },
}

impl<T: Scalar> RadiusProfile<T> {
    pub fn radius_sq(&self, tau: T) -> T {
        match *self {
            Self::Constant { radius } => radius * radius,
            Self::AffineAbs { base, slope } => base + slope * tau.abs(),
            Self::Exponential { r0, growth } => r0 * r0 * (growth * tau.abs()).exp(),
        }
    }

    fn check(&self) -> Result<()> {
        let ok = match *self {
            Self::Constant { radius } => radius >= T::zero() && radius.is_finite(),
            Self::AffineAbs { base, slope } => base >= T::zero() && slope >= T::zero() && (base + slope).is_finite(),
            Self::Exponential { r0, growth } => r0 >= T::zero() && growth.is_finite() && r0.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfiguration(format!("invalid radius profile {self:?}")))
        }
    }

    /// Whether `e^{rate·τ}ρ(τ)² → 0` as `τ → -∞`.
    pub fn decays_at(&self, rate: T) -> bool {
        match *self {
            Self::Constant { radius } => rate > T::zero() || radius == T::zero(),
            Self::AffineAbs { base, slope } => rate > T::zero() || (base == T::zero() && slope == T::zero()),
            Self::Exponential { r0, growth } => growth < rate || r0 == T::zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec<T> {
    /// The same state for every path.
    Point(SpectralState<T>),
    /// Independent `γ_j ~ N(0, std_j²)`; missing entries are zero.
    Gaussian { std: Vec<T> },
    /// Uniform in the H-ball of radius `ρ(τ)`.
    Ball(RadiusProfile<T>),
}

/// `‖D(τ)‖₊²` together with its meaning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyNorm<T> {
    pub value: T,
    /// `true` when `value` is a mean square rather than a supremum.
    pub mean_square: bool,
}

impl<T: Scalar> FamilySpec<T> {
    pub fn check(&self, modes: usize) -> Result<()> {
        match self {
            Self::Point(s) if s.len() != modes => Err(Error::Dimension {
                expected: modes,
                found: s.len(),
            }),
            Self::Point(s) if !s.is_finite() => Err(Error::InvalidConfiguration("point data must be finite".into())),
            Self::Gaussian { std } if std.len() > modes => Err(Error::Dimension {
                expected: modes,
                found: std.len(),
            }),
            Self::Gaussian { std } if std.iter().any(|s| !(*s >= T::zero()) || !s.is_finite()) => {
                Err(Error::InvalidConfiguration("standard deviations must be finite and nonnegative".into()))
            }
            Self::Ball(p) => p.check(),
            _ => Ok(()),
        }
    }

    /// Closed-form `‖D(τ)‖₊²`; Gaussian families report `Σ std_j²`.
    pub fn family_norm(&self, tau: T) -> FamilyNorm<T> {
        match self {
            Self::Point(s) => FamilyNorm {
                value: s.norm_sq(),
                mean_square: false,
            },
            Self::Gaussian { std } => FamilyNorm {
                value: std.iter().map(|&s| s * s).sum(),
                mean_square: true,
            },
            Self::Ball(p) => FamilyNorm {
                value: p.radius_sq(tau),
                mean_square: false,
            },
        }
    }

    /// Universe gate for pullback experiments at exponential weight `rate`.
    pub fn check_universe(&self, rate: T) -> Result<()> {
        match self {
            Self::Gaussian { .. } => Err(Error::Universe(
                "gaussian families are unbounded and only admitted for moment estimation".into(),
            )),
            Self::Point(s) if rate > T::zero() || s.norm_sq() == T::zero() => Ok(()),
            Self::Point(_) => Err(Error::Universe(format!("a fixed nonzero state needs a positive rate, got {rate}"))),
            Self::Ball(p) if p.decays_at(rate) => Ok(()),
            Self::Ball(p) => Err(Error::Universe(format!("e^(rate tau) rho(tau)^2 does not vanish for {p:?} at rate {rate}"))),
        }
    }

    /// Initial state of path `path_id`; a pure function of its arguments.
    pub fn sample_initial(&self, modes: usize, tau: T, path_id: u64, master_seed: u64) -> SpectralState<T> {
        let stream = CounterStream::new(master_seed, StreamPurpose::Initial, path_id);
        match self {
            Self::Point(s) => s.clone(),
            Self::Gaussian { std } => {
                let mut z = stream.normals(0);
                SpectralState::new(
                    (0..modes)
                        .map(|j| {
                            let g = T::lit(z.next().expect("unbounded"));
                            std.get(j).map_or(T::zero(), |&s| s * g)
                        })
                        .collect(),
                )
            }
            Self::Ball(p) => {
                let dir: Vec<f64> = stream.normals(0).take(modes).collect();
                let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
                let u = stream.uniform(modes as u64);
                let r = p.radius_sq(tau).as_f64().sqrt() * u.powf(1.0 / modes as f64);
                SpectralState::new(dir.iter().map(|x| T::lit(r * x / norm)).collect())
            }
        }
    }
}
