#![allow(dead_code)]

use std::f64::consts::PI;

use mra_core::model::{DeclaredConstants, Forcing, Model, ModelParams, Noise, NonlocalCoefficient, Reaction, Regime};
use mra_core::spectral::{Basis, SpectralState};

pub fn basis(n: usize) -> Basis<f64> {
    Basis::with_default_grid(PI, n).unwrap()
}

pub fn deterministic(n: usize, a: NonlocalCoefficient<f64>, f: Reaction<f64>, h: Forcing<f64>, rate: f64) -> Model<f64> {
    Model::new(
        basis(n),
        ModelParams {
            regime: Regime::DeterministicRandom,
            nonlocal: a,
            reaction: f,
            declared: DeclaredConstants::none(),
            noise: Noise::Zero,
            forcing: h,
            rate,
        },
    )
    .unwrap()
}

pub fn stochastic(
    n: usize,
    a: NonlocalCoefficient<f64>,
    f: Reaction<f64>,
    sigma: Noise<f64>,
    h: Forcing<f64>,
    rate: f64,
) -> Model<f64> {
    Model::new(
        basis(n),
        ModelParams {
            regime: Regime::Stochastic,
            nonlocal: a,
            reaction: f,
            declared: DeclaredConstants::none(),
            noise: sigma,
            forcing: h,
            rate,
        },
    )
    .unwrap()
}

/// Coefficients decaying like `1/j` so that `V` norms stay moderate.
pub fn state(raw: &[f64]) -> SpectralState<f64> {
    SpectralState::new(raw.iter().enumerate().map(|(j, &x)| x / (j + 1) as f64).collect())
}

/// Simpson's rule on `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

/// Scalar root of a monotone `g` on `[lo, hi]` by bisection.
pub fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let glo = g(lo);
    assert!(glo * g(hi) <= 0.0, "root not bracketed");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) == (glo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
