//! Parallel Monte Carlo over paths with a fixed-order reduction.

use rayon::prelude::*;

use super::family::FamilySpec;
use crate::error::{Error, Result};
use crate::integrate::{run_path, step_count, BrownianStream, PathSpec};
use crate::model::{Model, Regime};
use crate::scalar::Scalar;

/// Paths simulated per parallel batch before folding into the accumulators.
const BATCH: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig<T> {
    pub tau: T,
    pub end: T,
    pub dt: T,
    pub paths: usize,
    pub master_seed: u64,
    /// Record every `record_every` steps; the final step is always recorded.
    pub record_every: usize,
    /// Also estimate the running energy-identity residual.
    pub track_residual: bool,
    /// Worker threads; `0` lets the pool decide.
    pub threads: usize,
}

impl<T: Scalar> EnsembleConfig<T> {
    pub fn new(tau: T, end: T, dt: T, paths: usize, master_seed: u64) -> Self {
        Self {
            tau,
            end,
            dt,
            paths,
            master_seed,
            record_every: 1,
            track_residual: false,
            threads: 0,
        }
    }
}

/// Sample mean and 95% normal half-width per recorded time.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate<T> {
    pub mean: Vec<T>,
    pub ci_half_width: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult<T> {
    pub times: Vec<T>,
    pub path_count: usize,
    /// Estimate of `E‖u(t)‖²`.
    pub mean_h_sq: Vec<T>,
    pub ci_half_width: Vec<T>,
    /// Estimate of `E‖u(t)‖_V²`.
    pub mean_v_sq: Vec<T>,
    /// Running energy-identity residual, when tracked.
    pub residual: Option<Estimate<T>>,
}

/// Welford accumulator, folded in path order.
#[derive(Debug, Clone)]
struct Moments<T> {
    n: usize,
    mean: Vec<T>,
    m2: Vec<T>,
}

impl<T: Scalar> Moments<T> {
    fn new(len: usize) -> Self {
        Self {
            n: 0,
            mean: vec![T::zero(); len],
            m2: vec![T::zero(); len],
        }
    }

    fn push(&mut self, xs: &[T]) {
        self.n += 1;
        let n = T::count(self.n);
        for ((m, s), &x) in self.mean.iter_mut().zip(&mut self.m2).zip(xs) {
            let d = x - *m;
            *m = *m + d / n;
            *s = *s + d * (x - *m);
        }
    }

    fn finish(self) -> Estimate<T> {
        let p = T::count(self.n);
        let z = T::lit(1.96);
        let ci = self
            .m2
            .iter()
            .map(|&s| z * (s / (p - T::one())).max(T::zero()).sqrt() / p.sqrt())
            .collect();
        Estimate {
            mean: self.mean,
            ci_half_width: ci,
        }
    }
}

struct PathRecord<T> {
    h_sq: Vec<T>,
    v_sq: Vec<T>,
    residual: Vec<T>,
}

fn recorded(step: usize, steps: usize, every: usize) -> bool {
    step % every == 0 || step == steps
}

fn simulate_one<T: Scalar>(
    model: &Model<T>,
    family: &FamilySpec<T>,
    cfg: &EnsembleConfig<T>,
    steps: usize,
    records: usize,
    path_id: u64,
) -> Result<PathRecord<T>> {
    let initial = family.sample_initial(model.modes(), cfg.tau, path_id, cfg.master_seed);
    let stream = match model.regime() {
        Regime::Stochastic => Some(BrownianStream::new(cfg.master_seed, path_id, cfg.dt.as_f64())),
        Regime::DeterministicRandom => None,
    };
    let mut rec = PathRecord {
        h_sq: Vec::with_capacity(records),
        v_sq: Vec::with_capacity(records),
        residual: Vec::with_capacity(if cfg.track_residual { records } else { 0 }),
    };
    let basis = model.basis();
    run_path(
        model,
        initial,
        PathSpec {
            tau: cfg.tau,
            steps,
            dt: cfg.dt,
            stream: stream.as_ref(),
        },
        |k, _, s, r| {
            if recorded(k, steps, cfg.record_every) {
                let n = basis.sobolev_norms(s);
                rec.h_sq.push(n.h_sq);
                rec.v_sq.push(n.v_sq);
                if cfg.track_residual {
                    rec.residual.push(r);
                }
            }
        },
    )
    .map_err(|e| Error::Path {
        path_id,
        source: Box::new(e),
    })?;
    Ok(rec)
}

/// Runs `cfg.paths` independent paths from `family` and estimates the
/// second moments at every recorded time. Output is bit-identical for any
/// thread count.
pub fn run_ensemble<T: Scalar>(model: &Model<T>, family: &FamilySpec<T>, cfg: &EnsembleConfig<T>) -> Result<EnsembleResult<T>> {
    if cfg.paths < 2 {
        return Err(Error::InvalidConfiguration(format!("need at least 2 paths, got {}", cfg.paths)));
    }
    if cfg.record_every == 0 {
        return Err(Error::InvalidConfiguration("record_every must be at least 1".into()));
    }
    family.check(model.modes())?;
    let steps = step_count(cfg.tau, cfg.end, cfg.dt)?;
    let times: Vec<T> = (0..=steps)
        .filter(|&k| recorded(k, steps, cfg.record_every))
        .map(|k| cfg.tau + T::count(k) * cfg.dt)
        .collect();
    let records = times.len();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidConfiguration(format!("thread pool: {e}")))?;

    let mut h = Moments::new(records);
    let mut v = Moments::new(records);
    let mut r = Moments::new(if cfg.track_residual { records } else { 0 });
    let mut start = 0usize;
    while start < cfg.paths {
        let stop = (start + BATCH).min(cfg.paths);
        let batch: Vec<Result<PathRecord<T>>> = pool.install(|| {
            (start..stop)
                .into_par_iter()
                .map(|id| simulate_one(model, family, cfg, steps, records, id as u64))
                .collect()
        });
        for rec in batch {
            let rec = rec?;
            h.push(&rec.h_sq);
            v.push(&rec.v_sq);
            if cfg.track_residual {
                r.push(&rec.residual);
            }
        }
        start = stop;
    }

    let h = h.finish();
    Ok(EnsembleResult {
        times,
        path_count: cfg.paths,
        mean_h_sq: h.mean,
        ci_half_width: h.ci_half_width,
        mean_v_sq: v.finish().mean,
        residual: cfg.track_residual.then(|| r.finish()),
    })
}
