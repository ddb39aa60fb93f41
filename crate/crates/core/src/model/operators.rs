//! Numerical probes of the operator inequalities behind well-posedness.
//!
//! `B(t, u) = a(‖u‖_V²)Δu + f̃(u) + h(t)` is represented by its Galerkin
//! coefficients (the drift), so `⟨B(t, u), w⟩ = Σ drift_j w_j` and
//! `‖B(t, u)‖_{V*}² = Σ drift_j² / λ_j`. Nemytskii terms are evaluated with
//! the grid quadrature, on which the sine modes are orthonormal.

use super::Model;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::SpectralState;

/// Excesses over the coercivity and dual-norm bounds; nonpositive when the
/// bounds hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorProbe<T> {
    pub coercive_excess: T,
    /// `None` when `f` has no linear growth constant.
    pub dual_norm_excess: Option<T>,
}

/// Largest jump of `λ ↦ ⟨B(t, u + λz), v⟩` between neighbouring samples and
/// the jump a Lipschitz modulus allows at that spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HemicontinuityProbe<T> {
    pub max_jump: T,
    pub modulus_bound: T,
}

impl<T> HemicontinuityProbe<T>
where
    T: PartialOrd,
{
    pub fn is_continuous(&self) -> bool {
        self.max_jump <= self.modulus_bound
    }
}

impl<T: Scalar> Model<T> {
    fn check_len(&self, s: &SpectralState<T>) -> Result<()> {
        if s.len() != self.modes() {
            return Err(Error::Dimension {
                expected: self.modes(),
                found: s.len(),
            });
        }
        Ok(())
    }

    /// `⟨-a(‖u‖_V²)Δu + a(‖v‖_V²)Δv, u - v⟩`; nonnegative when `a(s²)s` is
    /// non-decreasing.
    pub fn nonlocal_monotone_gap(&self, u: &SpectralState<T>, v: &SpectralState<T>) -> Result<T> {
        self.check_len(u)?;
        self.check_len(v)?;
        let b = self.basis();
        let au = self.nonlocal_coefficient(b.sobolev_norms(u).v_sq);
        let av = self.nonlocal_coefficient(b.sobolev_norms(v).v_sq);
        let d = u.sub(v);
        Ok(au * b.v_dot(u, &d) - av * b.v_dot(v, &d))
    }

    /// `⟨B(t, u), w⟩`
    pub fn pairing(&self, u: &SpectralState<T>, w: &SpectralState<T>, t: T) -> Result<T> {
        self.check_len(w)?;
        let drift = self.drift(u, t)?;
        Ok(drift.iter().zip(w.coeffs()).map(|(&x, &y)| x * y).sum())
    }

    /// `2⟨B(t,u) - B(t,v), u - v⟩ + ‖σ(u) - σ(v)‖² - c‖u - v‖²` with
    /// `c = 2γ₁ + C_σ²`.
    pub fn weak_monotone_excess(&self, u: &SpectralState<T>, v: &SpectralState<T>, t: T) -> Result<T> {
        self.require_stochastic("weak monotonicity probe")?;
        let (g, _) = self.growth_or_err()?;
        let two = T::lit(2.0);
        let d = u.sub(v);
        let bu = self.pairing(u, &d, t)?;
        let bv = self.pairing(v, &d, t)?;
        let basis = self.basis();
        let su = self.nemytskii_noise(&basis.synthesize(u)?);
        let sv = self.nemytskii_noise(&basis.synthesize(v)?);
        let diff = crate::spectral::GridFunction::new(
            su.values().iter().zip(sv.values()).map(|(&x, &y)| x - y).collect(),
        );
        let c_sigma = self.params().noise.lipschitz();
        let c = two * g.gamma1 + c_sigma * c_sigma;
        Ok(two * (bu - bv) + basis.grid_norm_sq(&diff) - c * d.norm_sq())
    }

    /// Excesses over
    /// `2⟨B(t,u),u⟩ + ‖σ̃(u)‖² ≤ c₁‖u‖² - c₂‖u‖_V² + g(t)` with
    /// `c₁ = 2γ₄ + 1 + 2C_σ²`, `c₂ = 2m`, `g = 2γ₃|𝒪| + 2‖σ̃(0)‖² + ‖h(t)‖²`, and over
    /// `‖B(t,u)‖_{V*} ≤ d₁ + d₂‖u‖_V + ‖h(t)‖/√λ₁` with
    /// `d₁ = γ₂√(2|𝒪|/λ₁)`, `d₂ = M + √2 γ₂/λ₁`.
    pub fn coercivity_and_boundedness_probe(&self, u: &SpectralState<T>, t: T) -> Result<OperatorProbe<T>> {
        self.require_stochastic("coercivity probe")?;
        let (g, _) = self.growth_or_err()?;
        let p = self.params();
        let basis = self.basis();
        let two = T::lit(2.0);
        let measure = self.domain_measure();
        let lambda1 = basis.first_eigenvalue();
        let norms = basis.sobolev_norms(u);

        let drift = self.drift(u, t)?;
        let b_uu: T = drift.iter().zip(u.coeffs()).map(|(&x, &y)| x * y).sum();
        let sigma = self.nemytskii_noise(&basis.synthesize(u)?);
        let lhs = two * b_uu + basis.grid_norm_sq(&sigma);

        let c_sigma = p.noise.lipschitz();
        let c1 = two * g.gamma4 + T::one() + two * c_sigma * c_sigma;
        let c2 = two * p.nonlocal.lower();
        let h_sq = p.forcing.norm_sq(t);
        let g_t = two * g.gamma3 * measure + two * p.noise.norm_at_zero_sq(measure) + h_sq;
        let coercive_excess = lhs - (c1 * norms.h_sq - c2 * norms.v_sq + g_t);

        let dual_norm_excess = g.gamma2.map(|g2| {
            let d1 = g2 * (two * measure / lambda1).sqrt();
            let d2 = p.nonlocal.upper() + two.sqrt() * g2 / lambda1;
            let bound = d1 + d2 * norms.v_sq.sqrt() + h_sq.sqrt() / lambda1.sqrt();
            basis.dual_norm_sq(&drift).sqrt() - bound
        });

        Ok(OperatorProbe {
            coercive_excess,
            dual_norm_excess,
        })
    }

    /// Samples `λ ↦ ⟨B(t, u + λz), v⟩` at `samples` equispaced points of
    /// `[-1, 1]` and compares the largest jump with a Lipschitz modulus of
    /// the map on that segment.
    pub fn hemicontinuity_probe(
        &self,
        u: &SpectralState<T>,
        z: &SpectralState<T>,
        v: &SpectralState<T>,
        t: T,
        samples: usize,
    ) -> Result<HemicontinuityProbe<T>> {
        if samples < 2 {
            return Err(Error::InvalidConfiguration("hemicontinuity probe needs at least 2 samples".into()));
        }
        self.check_len(z)?;
        self.check_len(v)?;
        let step = T::lit(2.0) / T::count(samples - 1);
        let mut prev: Option<T> = None;
        let mut max_jump = T::zero();
        for i in 0..samples {
            let lam = -T::one() + step * T::count(i);
            let phi = self.pairing(&u.add_scaled(z, lam), v, t)?;
            if let Some(p) = prev {
                max_jump = max_jump.max((phi - p).abs());
            }
            prev = Some(phi);
        }

        let basis = self.basis();
        let p = self.params();
        let vn = |s: &SpectralState<T>| basis.sobolev_norms(s).v_sq.sqrt();
        let (uv, zv, vv) = (vn(u), vn(z), vn(v));
        let reach = uv + zv;
        let sup = |s: &SpectralState<T>| -> Result<T> {
            Ok(basis.synthesize(s)?.values().iter().fold(T::zero(), |m, x| m.max(x.abs())))
        };
        let radius = sup(u)? + sup(z)?;
        let lf = p.reaction.local_lipschitz(radius);
        let nonlocal = T::lit(2.0) * p.nonlocal.lipschitz() * reach * reach * zv * vv + p.nonlocal.upper() * zv * vv;
        let reaction = lf * z.norm_sq().sqrt() * v.norm_sq().sqrt();
        Ok(HemicontinuityProbe {
            max_jump,
            modulus_bound: (nonlocal + reaction) * step,
        })
    }

    fn growth_or_err(&self) -> Result<(super::GrowthConstants<T>, bool)> {
        self.params().growth_constants().ok_or_else(|| {
            Error::InvalidConfiguration(format!("no growth constants for reaction {}", self.params().reaction.name()))
        })
    }
}
