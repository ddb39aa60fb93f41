//! Assumption gates for both regimes.
//!
//! Structural inequalities on `f`, `a` and `σ` are checked on fixed sample
//! grids: `r ∈ {0} ∪ ±logspace(1e-6, 1e3, 5000)` for the reaction and noise,
//! and `s ∈ {0} ∪ logspace(1e-6, 1e6, 9999)` for the diffusion coefficient.
//! Conditions on constants are checked exactly.

use super::{Forcing, Model, Regime};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionCheck<T> {
    pub name: &'static str,
    pub status: CheckStatus,
    /// Distance to the boundary of the assumption; negative when violated.
    /// `None` when no constant exists to measure against.
    pub margin: Option<T>,
    pub note: String,
}

impl<T> AssumptionCheck<T> {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<T> {
    pub regime: Regime,
    pub checks: Vec<AssumptionCheck<T>>,
}

impl<T> ValidationReport<T> {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(AssumptionCheck::passed)
    }

    pub fn get(&self, name: &str) -> Option<&AssumptionCheck<T>> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AssumptionCheck<T>> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

fn logspace<T: Scalar>(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = T> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..n).map(move |i| T::lit(10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)))
}

/// Reaction/noise sample points, sorted ascending.
pub(crate) fn reaction_samples<T: Scalar>() -> Vec<T> {
    let pos: Vec<T> = logspace(1e-6, 1e3, 5000).collect();
    let mut out: Vec<T> = pos.iter().rev().map(|&r| -r).collect();
    out.push(T::zero());
    out.extend(pos);
    out
}

/// Coefficient sample points, sorted ascending.
pub(crate) fn coefficient_samples<T: Scalar>() -> Vec<T> {
    let mut out = vec![T::zero()];
    out.extend(logspace::<T>(1e-6, 1e6, 9999));
    out
}

fn tolerance<T: Scalar>() -> T {
    T::lit(1e-12).max(T::lit(100.0) * T::epsilon())
}

/// Minimum of `rhs - lhs` over the samples and whether every sample passes
/// within a relative tolerance.
fn sampled_slack<T: Scalar>(samples: &[T], mut sides: impl FnMut(T) -> (T, T)) -> (T, bool) {
    let tol = tolerance::<T>();
    let mut min = T::infinity();
    let mut ok = true;
    for &r in samples {
        let (lhs, rhs) = sides(r);
        let slack = rhs - lhs;
        if !(slack >= -tol * (T::one() + lhs.abs() + rhs.abs())) {
            ok = false;
        }
        min = min.min(slack);
    }
    (min, ok)
}

fn status(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

fn provenance(declared: bool) -> String {
    if declared {
        "sampled, not certified".into()
    } else {
        "certified".into()
    }
}

fn missing<T>(name: &'static str, what: &str) -> AssumptionCheck<T> {
    AssumptionCheck {
        name,
        status: CheckStatus::Fail,
        margin: None,
        note: format!("no certified {what}; declare the constants explicitly"),
    }
}

/// Checks every hypothesis of the model's regime.
pub fn validate_params<T: Scalar>(model: &Model<T>) -> ValidationReport<T> {
    let mut checks = Vec::new();
    let params = model.params();
    let f = &params.reaction;
    let rs = reaction_samples::<T>();
    let m = params.nonlocal.lower();
    let lambda1 = model.basis().first_eigenvalue();
    let two = T::lit(2.0);

    match params.regime {
        Regime::DeterministicRandom => match params.dissipation_constants() {
            None => {
                checks.push(missing("dissipativity", "dissipation constants"));
                checks.push(missing("growth", "growth constants"));
                checks.push(missing("one_sided_derivative", "derivative bound"));
            }
            Some((c, declared)) => {
                let (slack, ok) = sampled_slack(&rs, |r| (f.value(r) * r, -c.alpha * r.abs().powf(c.p) + c.beta));
                let shape_ok = c.alpha > T::zero() && c.beta >= T::zero() && c.p >= two;
                checks.push(AssumptionCheck {
                    name: "dissipativity",
                    status: status(ok && shape_ok),
                    margin: Some(if declared { c.alpha.min(slack) } else { c.alpha }),
                    note: format!("alpha = {}, beta = {}, p = {}; {}", c.alpha, c.beta, c.p, provenance(declared)),
                });
                let (slack, ok) = sampled_slack(&rs, |r| (f.value(r).abs(), c.gamma * r.abs().powf(c.p - T::one()) + c.delta));
                checks.push(AssumptionCheck {
                    name: "growth",
                    status: status(ok),
                    margin: Some(slack),
                    note: format!("gamma = {}, delta = {}; {}", c.gamma, c.delta, provenance(declared)),
                });
                let (slack, ok) = sampled_slack(&rs, |r| (f.derivative(r), c.eta));
                checks.push(AssumptionCheck {
                    name: "one_sided_derivative",
                    status: status(ok),
                    margin: Some(slack),
                    note: format!("eta = {}; {}", c.eta, provenance(declared)),
                });
            }
        },
        Regime::Stochastic => match params.growth_constants() {
            None => {
                checks.push(missing("one_sided_lipschitz", "derivative bound"));
                checks.push(missing("linear_growth", "growth constant"));
                checks.push(missing("quadratic_dissipativity", "dissipation constants"));
            }
            Some((c, declared)) => {
                let (slack, ok) = sampled_slack(&rs, |r| (f.derivative(r), c.gamma1));
                checks.push(AssumptionCheck {
                    name: "one_sided_lipschitz",
                    status: status(ok),
                    margin: Some(slack),
                    note: format!("gamma1 = {}; {}", c.gamma1, provenance(declared)),
                });
                match c.gamma2 {
                    None => checks.push(AssumptionCheck {
                        name: "linear_growth",
                        status: CheckStatus::Fail,
                        margin: None,
                        note: format!("{} grows superlinearly", f.name()),
                    }),
                    Some(g2) => {
                        let (slack, ok) = sampled_slack(&rs, |r| (f.value(r).abs(), g2 * (T::one() + r.abs())));
                        checks.push(AssumptionCheck {
                            name: "linear_growth",
                            status: status(ok),
                            margin: Some(slack),
                            note: format!("gamma2 = {g2}; {}", provenance(declared)),
                        });
                    }
                }
                let (slack, ok) = sampled_slack(&rs, |r| (f.value(r) * r, c.gamma3 + c.gamma4 * r * r));
                checks.push(AssumptionCheck {
                    name: "quadratic_dissipativity",
                    status: status(ok),
                    margin: Some(slack),
                    note: format!("gamma3 = {}, gamma4 = {}; {}", c.gamma3, c.gamma4, provenance(declared)),
                });
            }
        },
    }

    // coefficient sandwich m <= a(s) <= M
    let a = &params.nonlocal;
    let big_m = a.upper();
    let cs = coefficient_samples::<T>();
    let (slack, ok) = sampled_slack(&cs, |s| {
        let v = a.value(s);
        let dist = (v - m).min(big_m - v);
        (-dist, T::zero())
    });
    // sampled_slack reports rhs - lhs = dist
    checks.push(AssumptionCheck {
        name: "coefficient_bounds",
        status: status(ok && m > T::zero()),
        margin: Some(slack),
        note: format!("{}: m = {m}, M = {big_m}", a.name()),
    });

    // s ↦ a(s²)s non-decreasing
    let tol = tolerance::<T>();
    let mut min_inc = T::infinity();
    let mut mono = true;
    let g = |s: T| a.value(s * s) * s;
    for w in cs.windows(2) {
        let (g0, g1) = (g(w[0]), g(w[1]));
        let inc = g1 - g0;
        if !(inc >= -tol * (T::one() + g0.abs())) {
            mono = false;
        }
        min_inc = min_inc.min(inc);
    }
    checks.push(AssumptionCheck {
        name: "coefficient_monotonicity",
        status: status(mono),
        margin: Some(min_inc),
        note: "minimum increment of a(s^2)s on the sample grid".into(),
    });

    let rate = params.rate;
    match params.regime {
        Regime::DeterministicRandom => {
            let hi = two * m * lambda1;
            let margin = rate.min(hi - rate);
            checks.push(AssumptionCheck {
                name: "rate_admissible",
                status: status(margin > T::zero()),
                margin: Some(margin),
                note: format!("mu = {rate} must lie in (0, {hi})"),
            });
        }
        Regime::Stochastic => {
            let c_sigma = params.noise.lipschitz();
            let (cs_ratio, ok) = {
                let mut worst = T::zero();
                let round = T::lit(4.0) * T::epsilon();
                for w in rs.windows(2) {
                    let (s0, s1) = (params.noise.value(w[0]), params.noise.value(w[1]));
                    // discount the cancellation error of s1 - s0 on close samples
                    let diff = ((s1 - s0).abs() - round * (s0.abs() + s1.abs())).max(T::zero());
                    worst = worst.max(diff / (w[1] - w[0]));
                }
                (worst, worst <= c_sigma * (T::one() + tol) + tol)
            };
            checks.push(AssumptionCheck {
                name: "noise_lipschitz",
                status: status(ok),
                margin: Some(c_sigma - cs_ratio),
                note: format!("{}: C_sigma = {c_sigma}", params.noise.name()),
            });
            let gamma4 = params.growth_constants().map(|(c, _)| c.gamma4);
            match gamma4 {
                Some(g4) if g4.is_finite() => {
                    let margin = m * lambda1 / two - g4 - c_sigma * c_sigma;
                    checks.push(AssumptionCheck {
                        name: "noise_balance",
                        status: status(margin > T::zero()),
                        margin: Some(margin),
                        note: format!("m lambda1 / 2 = {}, gamma4 + C_sigma^2 = {}", m * lambda1 / two, g4 + c_sigma * c_sigma),
                    });
                    let gap = m * lambda1 - g4 - c_sigma * c_sigma;
                    let hi = two * gap;
                    let margin = rate.min(hi - rate);
                    let note = if rate >= gap && margin > T::zero() {
                        format!("omega0 = {rate} in (0, {hi}) but at or above the conservative bound {gap}")
                    } else {
                        format!("omega0 = {rate} must lie in (0, {hi})")
                    };
                    checks.push(AssumptionCheck {
                        name: "rate_admissible",
                        status: status(margin > T::zero()),
                        margin: Some(margin),
                        note,
                    });
                }
                _ => {
                    checks.push(missing("noise_balance", "gamma4"));
                    checks.push(missing("rate_admissible", "gamma4"));
                }
            }
        }
    }

    let integrable = params.forcing.check_integrable(rate);
    let margin = match &params.forcing {
        Forcing::Exponential { nu, .. } => rate + two * *nu,
        _ => rate,
    };
    checks.push(AssumptionCheck {
        name: "forcing_integrable",
        status: status(integrable.is_ok()),
        margin: Some(margin),
        note: match integrable {
            Ok(()) => format!("{} forcing", params.forcing.name()),
            Err(e) => e.to_string(),
        },
    });

    ValidationReport {
        regime: params.regime,
        checks,
    }
}
