//! External forcing `h(t) ∈ H`, stored through its mode coefficients.
//!
//! All integrals used by the absorbing-radius formulas are evaluated in closed
//! form. They are exposed in the discounted form
//! `∫_a^b e^{-ρ(b-r)} ‖h(r)‖² dr`, which stays finite for large `|b|`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum Forcing<T> {
    Zero,
    /// `h(t) = h₀`
    Constant { modes: Vec<T> },
    /// `h(t) = e^{νt} h₀`
    Exponential { nu: T, modes: Vec<T> },
    /// `h(t) = p(t) h₀` with `p(t) = Σ coeffs[k] t^k`
    Polynomial { coeffs: Vec<T>, modes: Vec<T> },
    /// Piecewise constant: `h(t) = values[i]` for `times[i] ≤ t < times[i+1]`,
    /// extended by the first value to the left and the last to the right.
    Tabulated { times: Vec<T>, values: Vec<Vec<T>> },
}

fn sq_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum()
}

fn poly_eval<T: Scalar>(coeffs: &[T], t: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * t + c)
}

fn poly_square<T: Scalar>(p: &[T]) -> Vec<T> {
    if p.is_empty() {
        return Vec::new();
    }
    let mut q = vec![T::zero(); 2 * p.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in p.iter().enumerate() {
            q[i + j] = q[i + j] + a * b;
        }
    }
    q
}

/// `G(t)` with `d/dt [e^{ρt} G(t)] = e^{ρt} q(t)` and `e^{ρt}G(t) → 0` as `t → -∞`.
fn poly_discounted_antiderivative<T: Scalar>(q: &[T], t: T, rate: T) -> T {
    let mut total = T::zero();
    for (k, &qk) in q.iter().enumerate() {
        if qk == T::zero() {
            continue;
        }
        // Σ_i (-1)^i k!/(k-i)! t^{k-i} / ρ^{i+1}
        let mut falling = T::one();
        let mut rho_pow = rate;
        for i in 0..=k {
            let term = falling * t.powi((k - i) as i32) / rho_pow;
            total = if i % 2 == 0 { total + qk * term } else { total - qk * term };
            falling = falling * T::count(k - i);
            rho_pow = rho_pow * rate;
        }
    }
    total
}

fn poly_antiderivative<T: Scalar>(q: &[T], t: T) -> T {
    q.iter()
        .enumerate()
        .map(|(k, &c)| c * t.powi(k as i32 + 1) / T::count(k + 1))
        .sum()
}

impl<T: Scalar> Forcing<T> {
    /// Longest mode vector carried by the specification.
    pub fn mode_len(&self) -> usize {
        match self {
            Self::Zero => 0,
            Self::Constant { modes } | Self::Exponential { modes, .. } | Self::Polynomial { modes, .. } => {
                modes.len()
            }
            Self::Tabulated { values, .. } => values.iter().map(Vec::len).max().unwrap_or(0),
        }
    }

    pub fn check_shape(&self) -> Result<()> {
        if let Self::Tabulated { times, values } = self {
            if times.is_empty() || times.len() != values.len() {
                return Err(Error::InvalidConfiguration(
                    "tabulated forcing needs one value vector per time".into(),
                ));
            }
            if times.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::InvalidConfiguration(
                    "tabulated forcing times must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }

    fn tabulated_index(times: &[T], t: T) -> usize {
        times.iter().rposition(|&s| s <= t).unwrap_or(0)
    }

    fn profile(&self, t: T) -> T {
        match self {
            Self::Zero | Self::Tabulated { .. } => T::zero(),
            Self::Constant { .. } => T::one(),
            Self::Exponential { nu, .. } => (*nu * t).exp(),
            Self::Polynomial { coeffs, .. } => poly_eval(coeffs, t),
        }
    }

    /// Mode coefficients `(h(t), e_j)`, `j = 1..=n`.
    pub fn modes_at(&self, t: T, n: usize) -> Vec<T> {
        let mut out = vec![T::zero(); n];
        let (base, scale) = match self {
            Self::Zero => return out,
            Self::Tabulated { times, values } => (&values[Self::tabulated_index(times, t)], T::one()),
            Self::Constant { modes } | Self::Exponential { modes, .. } | Self::Polynomial { modes, .. } => {
                (modes, self.profile(t))
            }
        };
        for (o, &b) in out.iter_mut().zip(base) {
            *o = scale * b;
        }
        out
    }

    /// `‖h(t)‖²`
    pub fn norm_sq(&self, t: T) -> T {
        match self {
            Self::Zero => T::zero(),
            Self::Tabulated { times, values } => sq_norm(&values[Self::tabulated_index(times, t)]),
            Self::Constant { modes } | Self::Exponential { modes, .. } | Self::Polynomial { modes, .. } => {
                let p = self.profile(t);
                p * p * sq_norm(modes)
            }
        }
    }

    /// `true` when `h(t)` does not depend on `t`.
    pub fn is_autonomous(&self) -> bool {
        match self {
            Self::Zero | Self::Constant { .. } => true,
            Self::Exponential { nu, modes } => *nu == T::zero() || sq_norm(modes) == T::zero(),
            Self::Polynomial { coeffs, modes } => {
                coeffs.iter().skip(1).all(|&c| c == T::zero()) || sq_norm(modes) == T::zero()
            }
            Self::Tabulated { values, .. } => values.windows(2).all(|w| w[0] == w[1]),
        }
    }

    /// Checks `∫_{-∞}^t e^{ρr}‖h(r)‖² dr < ∞`.
    pub fn check_integrable(&self, rate: T) -> Result<()> {
        let fail = |reason: String| {
            Err(Error::Integrability {
                rate: rate.as_f64(),
                reason,
            })
        };
        match self {
            Self::Zero => Ok(()),
            Self::Exponential { nu, modes } if sq_norm(modes) > T::zero() => {
                let k = rate + T::lit(2.0) * *nu;
                if k > T::zero() {
                    Ok(())
                } else {
                    fail(format!("rate + 2ν = {k} is not positive"))
                }
            }
            _ if self.is_identically_zero() => Ok(()),
            _ if rate > T::zero() => Ok(()),
            _ => fail("rate must be positive".into()),
        }
    }

    fn is_identically_zero(&self) -> bool {
        match self {
            Self::Zero => true,
            Self::Constant { modes } | Self::Exponential { modes, .. } => sq_norm(modes) == T::zero(),
            Self::Polynomial { coeffs, modes } => {
                sq_norm(modes) == T::zero() || coeffs.iter().all(|&c| c == T::zero())
            }
            Self::Tabulated { values, .. } => values.iter().all(|v| sq_norm(v) == T::zero()),
        }
    }

    /// `∫_a^b e^{-ρ(b-r)} ‖h(r)‖² dr` for `a ≤ b`, `ρ ≥ 0`.
    pub fn discounted_window(&self, a: T, b: T, rate: T) -> T {
        assert!(a <= b, "window must satisfy a <= b");
        assert!(rate >= T::zero(), "rate must be nonnegative");
        if a == b {
            return T::zero();
        }
        match self {
            Self::Zero => T::zero(),
            Self::Constant { modes } => Self::exp_window(T::zero(), sq_norm(modes), a, b, rate),
            Self::Exponential { nu, modes } => Self::exp_window(*nu, sq_norm(modes), a, b, rate),
            Self::Polynomial { coeffs, modes } => {
                let q: Vec<T> = poly_square(coeffs).into_iter().map(|c| c * sq_norm(modes)).collect();
                if rate == T::zero() {
                    poly_antiderivative(&q, b) - poly_antiderivative(&q, a)
                } else {
                    poly_discounted_antiderivative(&q, b, rate)
                        - (-rate * (b - a)).exp() * poly_discounted_antiderivative(&q, a, rate)
                }
            }
            Self::Tabulated { times, values } => {
                let mut total = T::zero();
                for (i, v) in values.iter().enumerate() {
                    let lo = if i == 0 { a } else { times[i].max(a) };
                    let hi = if i + 1 == values.len() { b } else { times[i + 1].min(b) };
                    if lo >= hi {
                        continue;
                    }
                    total = total + sq_norm(v) * Self::unit_window(lo, hi, b, rate);
                }
                total
            }
        }
    }

    // ∫_lo^hi e^{-ρ(end-r)} dr
    fn unit_window(lo: T, hi: T, end: T, rate: T) -> T {
        if rate == T::zero() {
            hi - lo
        } else {
            ((-rate * (end - hi)).exp() - (-rate * (end - lo)).exp()) / rate
        }
    }

    // ‖h₀‖² ∫_a^b e^{-ρ(b-r)} e^{2νr} dr
    fn exp_window(nu: T, h0_sq: T, a: T, b: T, rate: T) -> T {
        let k = rate + T::lit(2.0) * nu;
        let lead = (T::lit(2.0) * nu * b).exp();
        let x = k * (a - b);
        if x.abs() < T::lit(1e-300).max(T::min_positive_value()) {
            return h0_sq * lead * (b - a);
        }
        -h0_sq * lead * x.exp_m1() / k
    }

    /// `e^{-ρt} ∫_{-∞}^t e^{ρr}‖h(r)‖² dr`.
    pub fn discounted_tail(&self, t: T, rate: T) -> Result<T> {
        self.check_integrable(rate)?;
        Ok(match self {
            Self::Zero => T::zero(),
            _ if self.is_identically_zero() => T::zero(),
            Self::Constant { modes } => sq_norm(modes) / rate,
            Self::Exponential { nu, modes } => {
                let k = rate + T::lit(2.0) * *nu;
                sq_norm(modes) * (T::lit(2.0) * *nu * t).exp() / k
            }
            Self::Polynomial { coeffs, modes } => {
                let q: Vec<T> = poly_square(coeffs).into_iter().map(|c| c * sq_norm(modes)).collect();
                poly_discounted_antiderivative(&q, t, rate)
            }
            Self::Tabulated { times, values } => {
                let mut total = T::zero();
                for (i, v) in values.iter().enumerate() {
                    let hi = if i + 1 == values.len() { t } else { times[i + 1].min(t) };
                    if i == 0 {
                        total = total + sq_norm(v) * (-rate * (t - hi)).exp() / rate;
                        continue;
                    }
                    let lo = times[i];
                    if lo >= hi {
                        continue;
                    }
                    total = total + sq_norm(v) * Self::unit_window(lo, hi, t, rate);
                }
                total
            }
        })
    }

    /// `I(t, ρ) = ∫_{-∞}^t e^{ρr}‖h(r)‖² dr`.
    pub fn weighted_integral(&self, t: T, rate: T) -> Result<T> {
        Ok((rate * t).exp() * self.discounted_tail(t, rate)?)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::Constant { .. } => "constant",
            Self::Exponential { .. } => "exponential",
            Self::Polynomial { .. } => "polynomial",
            Self::Tabulated { .. } => "tabulated",
        }
    }
}
