//! Pullback entry times into the absorbing ball.

use super::constants::{absorbing_radius, DerivedConstants};
use super::report::BoundReport;
use crate::ensemble::{run_ensemble, EnsembleConfig, FamilySpec};
use crate::error::{Error, Result};
use crate::integrate::step_count;
use crate::model::Model;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct EntrySimulation<T> {
    pub dt: T,
    pub paths: usize,
    pub master_seed: u64,
    /// Largest pullback time on the grid `{1, 2, 4, …}`.
    pub cap: T,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntryRow<T> {
    pub s: T,
    pub mean_h_sq_at_t: T,
    pub ci_half_width: T,
    pub radius: T,
    pub absorbed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntryTime<T> {
    /// `inf{s ≥ 0 : e^{-rate·s}‖D(t-s)‖₊² ≤ 1}`
    pub theoretical: T,
    /// Smallest grid value whose ensemble mean lies in the ball.
    pub measured: Option<T>,
    /// First grid value at or after `theoretical`.
    pub next_grid_value: Option<T>,
    pub rows: Vec<EntryRow<T>>,
    /// Rows with `s ≥ theoretical`, where absorption is guaranteed.
    pub report: BoundReport<T>,
}

impl<T: Scalar> EntryTime<T> {
    /// Measured entry no later than one grid step past the theoretical time.
    pub fn within_one_step(&self) -> bool {
        match (self.measured, self.next_grid_value) {
            (Some(m), Some(n)) => m <= n,
            (Some(_), None) => true,
            _ => false,
        }
    }
}

/// `{1, 2, 4, …} ∩ [1, cap]`
pub fn entry_grid<T: Scalar>(cap: T) -> Vec<T> {
    let mut out = Vec::new();
    let mut s = T::one();
    while s <= cap {
        out.push(s);
        s = s * T::lit(2.0);
    }
    out
}

/// Smallest `s ≥ 0` with `e^{-rate·s}‖D(t-s)‖₊² ≤ 1`, by bracketing and
/// bisection to `1e-12`.
pub fn theoretical_entry_time<T: Scalar>(t: T, family: &FamilySpec<T>, rate: T) -> Result<T> {
    let g = |s: T| (-rate * s).exp() * family.family_norm(t - s).value - T::one();
    if g(T::zero()) <= T::zero() {
        return Ok(T::zero());
    }
    let mut lo = T::zero();
    let mut hi = T::one();
    let mut tries = 0;
    while g(hi) > T::zero() {
        lo = hi;
        hi = hi * T::lit(2.0);
        tries += 1;
        if tries > 200 || !hi.is_finite() {
            return Err(Error::Universe("family never enters the unit weighted ball".into()));
        }
    }
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
    for _ in 0..400 {
        if hi - lo <= tol * (T::one() + hi) {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        if g(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Theoretical and simulated pullback entry times of `family` into the
/// absorbing ball at time `t`.
pub fn pullback_entry_time<T: Scalar>(
    t: T,
    family: &FamilySpec<T>,
    model: &Model<T>,
    consts: &DerivedConstants<T>,
    sim: &EntrySimulation<T>,
) -> Result<EntryTime<T>> {
    family.check_universe(consts.rate)?;
    family.check(model.modes())?;
    let theoretical = theoretical_entry_time(t, family, consts.rate)?;
    let radius = absorbing_radius(t, model, consts)?;
    let grid = entry_grid(sim.cap);
    if grid.is_empty() {
        return Err(Error::InvalidConfiguration(format!("entry grid cap must be at least 1, got {}", sim.cap)));
    }

    let mut rows = Vec::with_capacity(grid.len());
    for &s in &grid {
        let tau = t - s;
        let mut cfg = EnsembleConfig::new(tau, t, sim.dt, sim.paths, sim.master_seed);
        cfg.record_every = step_count(tau, t, sim.dt)?;
        cfg.threads = sim.threads;
        let res = run_ensemble(model, family, &cfg)?;
        let mean = *res.mean_h_sq.last().expect("final time is recorded");
        let ci = *res.ci_half_width.last().expect("final time is recorded");
        rows.push(EntryRow {
            s,
            mean_h_sq_at_t: mean,
            ci_half_width: ci,
            radius,
            absorbed: mean <= radius + ci,
        });
    }

    let measured = rows.iter().find(|r| r.absorbed).map(|r| r.s);
    let next_grid_value = grid.iter().copied().find(|&s| s >= theoretical);
    let guaranteed: Vec<&EntryRow<T>> = rows.iter().filter(|r| r.s >= theoretical).collect();
    let report = BoundReport::new(
        guaranteed.iter().map(|r| r.s).collect(),
        guaranteed.iter().map(|r| r.radius).collect(),
        guaranteed.iter().map(|r| r.mean_h_sq_at_t).collect(),
        guaranteed.iter().map(|r| r.ci_half_width).collect(),
    );
    Ok(EntryTime {
        theoretical,
        measured,
        next_grid_value,
        rows,
        report,
    })
}
