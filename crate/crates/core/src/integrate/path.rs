//! Whole-path integration, trajectories and energy-identity residuals.

use super::brownian::BrownianStream;
use super::stepper::{check_dt, StepTerms};
use crate::error::{Error, Result};
use crate::model::{Model, Regime};
use crate::scalar::Scalar;
use crate::spectral::SpectralState;

/// `‖u‖²` above which a path is declared to have blown up.
pub const BLOW_UP_THRESHOLD: f64 = 1e12;

/// Uniform-step solution record with per-step diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub dt: T,
    pub times: Vec<T>,
    pub states: Vec<SpectralState<T>>,
    /// `‖u‖²`
    pub h_sq: Vec<T>,
    /// `‖u‖_V²`
    pub v_sq: Vec<T>,
    /// `a(‖u‖_V²)`
    pub coefficient: Vec<T>,
    /// `‖Δu‖²`
    pub laplacian_sq: Vec<T>,
}

impl<T: Scalar> Trajectory<T> {
    fn with_capacity(dt: T, n: usize) -> Self {
        Self {
            dt,
            times: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
            h_sq: Vec::with_capacity(n),
            v_sq: Vec::with_capacity(n),
            coefficient: Vec::with_capacity(n),
            laplacian_sq: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, model: &Model<T>, t: T, state: &SpectralState<T>) {
        let n = model.basis().sobolev_norms(state);
        self.times.push(t);
        self.h_sq.push(n.h_sq);
        self.v_sq.push(n.v_sq);
        self.coefficient.push(model.nonlocal_coefficient(n.v_sq));
        self.laplacian_sq.push(model.basis().laplacian_norm_sq(state));
        self.states.push(state.clone());
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&SpectralState<T>> {
        self.states.last()
    }
}

/// Number of uniform steps covering `[tau, end]`; the final time lands
/// within `dt/2` of `end`.
pub fn step_count<T: Scalar>(tau: T, end: T, dt: T) -> Result<usize> {
    check_dt(dt)?;
    if !(end > tau) {
        return Err(Error::InvalidConfiguration(format!("need tau < end, got tau = {tau}, end = {end}")));
    }
    let n = ((end - tau) / dt).round().to_usize().ok_or_else(|| {
        Error::InvalidConfiguration(format!("step count for [{tau}, {end}] at dt = {dt} is not representable"))
    })?;
    Ok(n.max(1))
}

/// Time grid and noise source of one path.
#[derive(Debug, Clone, Copy)]
pub struct PathSpec<'a, T> {
    pub tau: T,
    pub steps: usize,
    pub dt: T,
    pub stream: Option<&'a BrownianStream>,
}

fn check_stream<T: Scalar>(model: &Model<T>, stream: Option<&BrownianStream>) -> Result<()> {
    match (model.regime(), stream) {
        (Regime::Stochastic, None) => Err(Error::InvalidConfiguration(
            "stochastic mode needs a Brownian stream".into(),
        )),
        (Regime::DeterministicRandom, Some(_)) => Err(Error::Mode {
            regime: Regime::DeterministicRandom.name(),
            what: "Brownian forcing",
        }),
        _ => Ok(()),
    }
}

/// Integrates one path, calling `visit(step, t, state, residual)` at the
/// initial time and after every step. `residual` is the running sum of
/// interval energy residuals since `tau`. Returns the final state.
pub fn run_path<T: Scalar>(
    model: &Model<T>,
    initial: SpectralState<T>,
    spec: PathSpec<'_, T>,
    mut visit: impl FnMut(usize, T, &SpectralState<T>, T),
) -> Result<SpectralState<T>> {
    check_dt(spec.dt)?;
    check_stream(model, spec.stream)?;
    if initial.len() != model.modes() {
        return Err(Error::Dimension {
            expected: model.modes(),
            found: initial.len(),
        });
    }
    let time = |k: usize| spec.tau + T::count(k) * spec.dt;
    let mut increments = spec.stream.map(|s| s.increments(0));
    let mut state = initial;
    let mut residual = T::zero();
    visit(0, spec.tau, &state, residual);
    for k in 0..spec.steps {
        let t = time(k);
        let dw = match increments.as_mut() {
            Some(it) => T::lit(it.next().expect("increment streams are unbounded")),
            None => T::zero(),
        };
        let terms = StepTerms::at(model, &state, t)?;
        let next = terms.advance(model, &state, spec.dt, dw);
        let h_sq = next.norm_sq();
        if !next.is_finite() || !(h_sq <= T::lit(BLOW_UP_THRESHOLD)) {
            return Err(Error::BlowUp {
                step: k + 1,
                time: time(k + 1).as_f64(),
                h_sq: h_sq.as_f64(),
            });
        }
        residual = residual + terms.energy_residual(&state, &next, spec.dt, dw);
        state = next;
        visit(k + 1, time(k + 1), &state, residual);
    }
    Ok(state)
}

/// Simulates `[tau, end]` at step `dt`, recording every step.
pub fn simulate_path<T: Scalar>(
    model: &Model<T>,
    initial: &SpectralState<T>,
    tau: T,
    end: T,
    dt: T,
    stream: Option<&BrownianStream>,
) -> Result<Trajectory<T>> {
    let steps = step_count(tau, end, dt)?;
    let mut traj = Trajectory::with_capacity(dt, steps + 1);
    run_path(
        model,
        initial.clone(),
        PathSpec { tau, steps, dt, stream },
        |_, t, s, _| traj.push(model, t, s),
    )?;
    Ok(traj)
}

/// Per-interval residuals of the discrete energy identity
/// `‖u_{k+1}‖² - ‖u_k‖² + 2dt a_k‖u_k‖_V² - 2dt(F_k + h_k, u_k) - dt‖σ_k‖² - 2(σ_k, u_k)dW_k`.
pub fn energy_residual<T: Scalar>(
    traj: &Trajectory<T>,
    model: &Model<T>,
    stream: Option<&BrownianStream>,
) -> Result<Vec<T>> {
    check_stream(model, stream)?;
    traj.states
        .windows(2)
        .zip(&traj.times)
        .enumerate()
        .map(|(k, (w, &t))| {
            let dw = stream.map_or(T::zero(), |s| T::lit(s.increment(k as u64)));
            Ok(StepTerms::at(model, &w[0], t)?.energy_residual(&w[0], &w[1], traj.dt, dw))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;
    use crate::spectral::Basis;

    fn model(regime: Regime, f: Reaction<f64>, sigma: Noise<f64>) -> Model<f64> {
        Model::new(
            Basis::with_default_grid(std::f64::consts::PI, 3).unwrap(),
            ModelParams {
                regime,
                nonlocal: NonlocalCoefficient::Constant(1.0),
                reaction: f,
                declared: DeclaredConstants::none(),
                noise: sigma,
                forcing: Forcing::Zero,
                rate: 1.0,
            },
        )
        .unwrap()
    }

    #[test]
    fn zero_trajectory() {
        let m = model(Regime::DeterministicRandom, Reaction::Linear { slope: 0.0 }, Noise::Zero);
        let tr = simulate_path(&m, &SpectralState::zeros(3), 0.0, 1.0, 0.1, None).unwrap();
        assert_eq!(tr.len(), 11);
        assert!((tr.times[10] - 1.0).abs() < 1e-12);
        assert!(tr.h_sq.iter().all(|&x| x == 0.0));
        assert!(energy_residual(&tr, &m, None).unwrap().iter().all(|&r| r == 0.0));
    }

    #[test]
    fn stream_presence() {
        let d = model(Regime::DeterministicRandom, Reaction::Linear { slope: 0.0 }, Noise::Zero);
        let s = model(Regime::Stochastic, Reaction::Linear { slope: 0.0 }, Noise::Affine { lipschitz: 0.1, at_zero: 0.0 });
        let b = BrownianStream::new(1, 0, 0.1);
        let u = SpectralState::zeros(3);
        assert!(simulate_path(&d, &u, 0.0, 1.0, 0.1, Some(&b)).is_err());
        assert!(simulate_path(&s, &u, 0.0, 1.0, 0.1, None).is_err());
        assert!(simulate_path(&s, &u, 1.0, 1.0, 0.1, Some(&b)).is_err());
    }

    #[test]
    fn blow_up_is_reported() {
        let m = model(Regime::DeterministicRandom, Reaction::Linear { slope: 50.0 }, Noise::Zero);
        let err = simulate_path(&m, &SpectralState::new(vec![1.0, 0.0, 0.0]), 0.0, 10.0, 0.01, None).unwrap_err();
        match err {
            Error::BlowUp { step, h_sq, .. } => {
                assert!(step > 1);
                assert!(h_sq > BLOW_UP_THRESHOLD);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn recorded_residual_matches_recomputed() {
        let m = model(Regime::Stochastic, Reaction::Tanh { gain: 0.4 }, Noise::Sine { amplitude: 0.3 });
        let b = BrownianStream::new(11, 2, 0.01);
        let u = SpectralState::new(vec![0.5, -0.2, 0.1]);
        let mut running = Vec::new();
        run_path(&m, u.clone(), PathSpec { tau: 0.0, steps: 50, dt: 0.01, stream: Some(&b) }, |_, _, _, r| running.push(r)).unwrap();
        let tr = simulate_path(&m, &u, 0.0, 0.5, 0.01, Some(&b)).unwrap();
        let per = energy_residual(&tr, &m, Some(&b)).unwrap();
        let mut acc = 0.0;
        for (k, r) in per.iter().enumerate() {
            acc += r;
            assert!((acc - running[k + 1]).abs() < 1e-14);
        }
    }
}
