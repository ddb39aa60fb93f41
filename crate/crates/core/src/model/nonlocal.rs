use crate::scalar::Scalar;

/// Non-local diffusion coefficient `a(s)`, evaluated at `s = ‖u‖_V²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NonlocalCoefficient<T> {
    /// `a(s) = c`
    Constant(T),
    /// `a(s) = m + (M - m) s / (1 + s)`, increasing from `m` to `M`.
    Saturating { m: T, big_m: T },
    /// `a(s) = m + (M - m) / (1 + s)`, decreasing from `M` to `m`.
    /// `s ↦ a(s²)s` is non-decreasing only when `M ≤ 9m`.
    Decreasing { m: T, big_m: T },
}

impl<T: Scalar> NonlocalCoefficient<T> {
    pub fn value(&self, s: T) -> T {
        match *self {
            Self::Constant(c) => c,
            Self::Saturating { m, big_m } => m + (big_m - m) * s / (T::one() + s),
            Self::Decreasing { m, big_m } => m + (big_m - m) / (T::one() + s),
        }
    }

    /// Lower bound `m`.
    pub fn lower(&self) -> T {
        match *self {
            Self::Constant(c) => c,
            Self::Saturating { m, .. } | Self::Decreasing { m, .. } => m,
        }
    }

    /// Upper bound `M`.
    pub fn upper(&self) -> T {
        match *self {
            Self::Constant(c) => c,
            Self::Saturating { big_m, .. } | Self::Decreasing { big_m, .. } => big_m,
        }
    }

    /// Global Lipschitz constant of `s ↦ a(s)` on `s ≥ 0`.
    pub fn lipschitz(&self) -> T {
        match *self {
            Self::Constant(_) => T::zero(),
            Self::Saturating { m, big_m } | Self::Decreasing { m, big_m } => (big_m - m).abs(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Constant(_) => "constant",
            Self::Saturating { .. } => "saturating",
            Self::Decreasing { .. } => "decreasing",
        }
    }
}
