//! Boundedness of `t ↦ e^{-rate·t}∫_{-∞}^t e^{rate·r}‖h(r)‖² dr`.

use crate::error::Result;
use crate::model::Forcing;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusClass<T> {
    /// Bounded on all of `ℝ`; `sup` bounds the weighted tail.
    BoundedEverywhere { sup: T },
    /// Bounded on every half-line `(-∞, t0]`, unbounded as `t → +∞`;
    /// `sup` is the supremum over `(-∞, t0]`.
    BoundedBackwards { t0: T, sup: T },
    Unbounded,
}

fn sq<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum()
}

/// Classifies the forcing tail at `rate`; `t0` is where the backward
/// supremum is reported.
pub fn radius_boundedness<T: Scalar>(forcing: &Forcing<T>, rate: T, t0: T) -> Result<RadiusClass<T>> {
    forcing.check_integrable(rate)?;
    let zero = T::zero();
    Ok(match forcing {
        Forcing::Zero => RadiusClass::BoundedEverywhere { sup: zero },
        Forcing::Constant { modes } => RadiusClass::BoundedEverywhere { sup: sq(modes) / rate },
        Forcing::Exponential { nu, modes } => {
            if sq(modes) == zero || *nu == zero {
                RadiusClass::BoundedEverywhere {
                    sup: forcing.discounted_tail(zero, rate)?,
                }
            } else if *nu > zero {
                RadiusClass::BoundedBackwards {
                    t0,
                    sup: forcing.discounted_tail(t0, rate)?,
                }
            } else {
                RadiusClass::Unbounded
            }
        }
        Forcing::Polynomial { coeffs, modes } => {
            let degree = coeffs.iter().rposition(|&c| c != zero);
            match degree {
                _ if sq(modes) == zero => RadiusClass::BoundedEverywhere { sup: zero },
                None => RadiusClass::BoundedEverywhere { sup: zero },
                Some(0) => RadiusClass::BoundedEverywhere {
                    sup: coeffs[0] * coeffs[0] * sq(modes) / rate,
                },
                Some(_) => RadiusClass::Unbounded,
            }
        }
        Forcing::Tabulated { values, .. } => RadiusClass::BoundedEverywhere {
            sup: values.iter().map(|v| sq(v)).fold(zero, T::max) / rate,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_classes() {
        let c = Forcing::Constant { modes: vec![1.0, 1.0] };
        assert_eq!(radius_boundedness(&c, 2.0, 0.0).unwrap(), RadiusClass::BoundedEverywhere { sup: 1.0 });
        let e = Forcing::Exponential { nu: 0.1, modes: vec![1.0] };
        assert!(matches!(radius_boundedness(&e, 1.0, 0.0).unwrap(), RadiusClass::BoundedBackwards { .. }));
        let p = Forcing::Polynomial { coeffs: vec![0.0, 1.0], modes: vec![1.0] };
        assert_eq!(radius_boundedness(&p, 1.0, 0.0).unwrap(), RadiusClass::Unbounded);
        let d = Forcing::Exponential { nu: -0.1, modes: vec![1.0] };
        assert_eq!(radius_boundedness(&d, 1.0, 0.0).unwrap(), RadiusClass::Unbounded);
    }
}
