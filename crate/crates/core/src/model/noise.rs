use crate::scalar::Scalar;

/// Pointwise noise intensity `σ(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noise<T> {
    Zero,
    /// `σ(r) = at_zero + lipschitz · r`
    Affine { lipschitz: T, at_zero: T },
    /// `σ(r) = amplitude · sin r`
    Sine { amplitude: T },
}

impl<T: Scalar> Noise<T> {
    pub fn value(&self, r: T) -> T {
        match *self {
            Self::Zero => T::zero(),
            Self::Affine { lipschitz, at_zero } => at_zero + lipschitz * r,
            Self::Sine { amplitude } => amplitude * r.sin(),
        }
    }

    /// `C_σ`
    pub fn lipschitz(&self) -> T {
        match *self {
            Self::Zero => T::zero(),
            Self::Affine { lipschitz, .. } => lipschitz.abs(),
            Self::Sine { amplitude } => amplitude.abs(),
        }
    }

    pub fn at_zero(&self) -> T {
        match *self {
            Self::Affine { at_zero, .. } => at_zero,
            Self::Zero | Self::Sine { .. } => T::zero(),
        }
    }

    /// `‖σ̃(0)‖²` on a domain of measure `measure`.
    pub fn norm_at_zero_sq(&self, measure: T) -> T {
        let s0 = self.at_zero();
        s0 * s0 * measure
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            Self::Zero => true,
            Self::Affine { lipschitz, at_zero } => lipschitz == T::zero() && at_zero == T::zero(),
            Self::Sine { amplitude } => amplitude == T::zero(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::Affine { .. } => "affine",
            Self::Sine { .. } => "sine",
        }
    }
}
