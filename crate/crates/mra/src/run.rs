//! Experiment runners. Each writes `results.csv`, `summary.json` and, for
//! curve-shaped results, `plot.svg`.

use std::path::{Path, PathBuf};

use mra_core::ensemble::{run_ensemble, EnsembleConfig, EnsembleResult, FamilySpec};
use mra_core::integrate::{simulate_path, BrownianStream};
use mra_core::lab::{
    absorbing_radius, decay_bound, derive_constants, pullback_entry_time, steady_residual, steady_state, BoundReport,
    DerivedConstants, EntrySimulation, RateChoice,
};
use mra_core::model::{validate_params, CheckStatus, NonlocalCoefficient, Noise, Regime};
use mra_core::{Error, Model64};
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::manifest::{Kind, Manifest, RateSpec, ReactionPreset};
use crate::output::{self, line_plot, Cell, Series, Table};

/// Steady-state residual target.
pub const STEADY_TOL: f64 = 1e-10;
/// Allowed drift of a re-simulated steady state.
pub const HOLD_TOL: f64 = 1e-8;
/// Times at which a steady state is compared with the absorbing radius.
pub const STEADY_RADIUS_TIMES: [f64; 3] = [-10.0, 0.0, 10.0];

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads for ensembles; 0 lets the pool decide.
    pub threads: usize,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub margin: Option<f64>,
}

impl Verdict {
    fn new(name: &str, pass: bool, margin: Option<f64>) -> Self {
        Self {
            name: name.to_string(),
            pass,
            margin,
        }
    }

    fn from_report(name: &str, r: &BoundReport<f64>) -> Self {
        Self::new(name, r.pass, Some(r.margin).filter(|m| m.is_finite()))
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub kind: Kind,
    pub artifacts: Vec<PathBuf>,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
}

struct Artifacts {
    table: Table,
    verdicts: Vec<Verdict>,
    details: Map<String, Value>,
    constants: Option<DerivedConstants<f64>>,
    plot: Option<(String, String, Vec<Series>)>,
}

impl Artifacts {
    fn new(table: Table) -> Self {
        Self {
            table,
            verdicts: Vec::new(),
            details: Map::new(),
            constants: None,
            plot: None,
        }
    }
}

/// Runs the manifest's experiment as `kind` and writes its artifacts.
pub fn run_experiment(manifest: &Manifest, kind: Kind, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    if let Some(k) = manifest.kind {
        if k != kind {
            return Err(CliError::KindMismatch { command: kind, manifest: k });
        }
    }
    let mut m = manifest.clone();
    if let Some(seed) = opts.seed {
        m.seed = seed;
    }
    let dir = opts
        .out
        .clone()
        .or_else(|| m.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("mra-out"));

    let art = match kind {
        Kind::Check => check(&m)?,
        Kind::Simulate => simulate(&m)?,
        Kind::Ensemble => ensemble(&m, opts.threads)?,
        Kind::Decay => decay(&m, opts.threads)?,
        Kind::Absorb => absorb(&m, opts.threads)?,
        Kind::EntryTime => entry(&m, opts.threads)?,
        Kind::Steady => steady(&m)?,
        Kind::OracleCompare => oracle(&m, opts.threads)?,
    };
    write_artifacts(&dir, kind, &m, art)
}

fn write_artifacts(dir: &Path, kind: Kind, m: &Manifest, art: Artifacts) -> Result<RunOutcome, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let pass = art.verdicts.iter().all(|v| v.pass);
    let mut artifacts = Vec::new();

    let csv = dir.join("results.csv");
    output::write(&csv, &art.table.to_csv())?;
    artifacts.push(csv);

    let summary = json!({
        "kind": kind.name(),
        "regime": m.regime.name(),
        "seed": m.seed,
        "verdict": if pass { "pass" } else { "fail" },
        "verdicts": art.verdicts.iter().map(|v| json!({
            "name": v.name,
            "verdict": if v.pass { "pass" } else { "fail" },
            "margin": v.margin,
        })).collect::<Vec<_>>(),
        "constants": art.constants.as_ref().map(constants_json),
        "details": Value::Object(art.details),
    });
    let path = dir.join("summary.json");
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    output::write(&path, &text)?;
    artifacts.push(path);

    if let Some((title, x_label, series)) = art.plot {
        let path = dir.join("plot.svg");
        output::write(&path, &line_plot(&title, &x_label, &series))?;
        artifacts.push(path);
    }
    Ok(RunOutcome {
        kind,
        artifacts,
        verdicts: art.verdicts,
        pass,
    })
}

fn constants_json(c: &DerivedConstants<f64>) -> Value {
    json!({
        "epsilon": c.epsilon,
        "rate": c.rate,
        "k1": c.k1,
        "k2": c.k2,
        "beyond_stated_range": c.beyond_stated_range,
        "note": c.note,
    })
}

fn constants(m: &Manifest, model: &Model64) -> Result<DerivedConstants<f64>, CliError> {
    let choice = match m.rate {
        RateSpec::Rate(r) => RateChoice::Rate(r),
        RateSpec::Epsilon(e) => RateChoice::Epsilon(e),
    };
    Ok(derive_constants(model, choice)?)
}

fn check(m: &Manifest) -> Result<Artifacts, CliError> {
    let model = m.model_for_check()?;
    let report = validate_params(&model);
    let mut art = Artifacts::new(Table::new(&["assumption", "status", "margin"]));
    let mut notes = Map::new();
    for c in &report.checks {
        let status = match c.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
        };
        art.table.push(vec![c.name.into(), status.into(), c.margin.map_or(Cell::Text(String::new()), Cell::Num)]);
        art.verdicts.push(Verdict::new(c.name, c.passed(), c.margin));
        if !c.note.is_empty() {
            notes.insert(c.name.to_string(), Value::String(c.note.clone()));
        }
    }
    art.details.insert("notes".into(), Value::Object(notes));
    art.constants = constants(m, &model).ok();
    Ok(art)
}

fn stream_for(m: &Manifest, path_id: u64) -> Option<BrownianStream> {
    match m.regime {
        Regime::Stochastic => Some(BrownianStream::new(m.seed, path_id, m.time.dt)),
        Regime::DeterministicRandom => None,
    }
}

fn simulate(m: &Manifest) -> Result<Artifacts, CliError> {
    let model = m.model()?;
    let family = m.family_spec();
    family.check(model.modes())?;
    let u0 = family.sample_initial(model.modes(), m.time.tau, 0, m.seed);
    let stream = stream_for(m, 0);
    let traj = simulate_path(&model, &u0, m.time.tau, m.time.end, m.time.dt, stream.as_ref())?;
    let mut art = Artifacts::new(Table::new(&["t", "h_sq", "v_sq", "coefficient", "laplacian_sq"]));
    let last = traj.len() - 1;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in (0..traj.len()).filter(|&k| k % m.time.record_every == 0 || k == last) {
        art.table.push(vec![
            traj.times[k].into(),
            traj.h_sq[k].into(),
            traj.v_sq[k].into(),
            traj.coefficient[k].into(),
            traj.laplacian_sq[k].into(),
        ]);
        xs.push(traj.times[k]);
        ys.push(traj.h_sq[k]);
    }
    art.details.insert("final_state".into(), json!(traj.states[last].coeffs()));
    art.plot = Some(("path energy".into(), "t".into(), vec![Series { label: "|u|^2".into(), xs, ys }]));
    Ok(art)
}

fn ensemble_config(m: &Manifest, threads: usize, track_residual: bool) -> EnsembleConfig<f64> {
    let mut cfg = EnsembleConfig::new(m.time.tau, m.time.end, m.time.dt, m.paths, m.seed);
    cfg.record_every = m.time.record_every;
    cfg.threads = threads;
    cfg.track_residual = track_residual;
    cfg
}

fn ensemble(m: &Manifest, threads: usize) -> Result<Artifacts, CliError> {
    let model = m.model()?;
    let stochastic = model.regime() == Regime::Stochastic;
    let res = run_ensemble(&model, &m.family_spec(), &ensemble_config(m, threads, stochastic))?;
    let header: &[&str] = if stochastic {
        &["t", "mean_h_sq", "ci_half_width", "mean_v_sq", "residual_mean", "residual_ci"]
    } else {
        &["t", "mean_h_sq", "ci_half_width", "mean_v_sq"]
    };
    let mut art = Artifacts::new(Table::new(header));
    for k in 0..res.times.len() {
        let mut row: Vec<Cell> = vec![
            res.times[k].into(),
            res.mean_h_sq[k].into(),
            res.ci_half_width[k].into(),
            res.mean_v_sq[k].into(),
        ];
        if let Some(r) = &res.residual {
            row.push(r.mean[k].into());
            row.push(r.ci_half_width[k].into());
        }
        art.table.push(row);
    }
    art.details.insert("paths".into(), json!(res.path_count));
    art.plot = Some(("ensemble second moment".into(), "t".into(), mean_and_band(&res)));
    Ok(art)
}

fn mean_and_band(res: &EnsembleResult<f64>) -> Vec<Series> {
    let upper = res.mean_h_sq.iter().zip(&res.ci_half_width).map(|(m, c)| m + c).collect();
    vec![
        Series {
            label: "mean |u|^2".into(),
            xs: res.times.clone(),
            ys: res.mean_h_sq.clone(),
        },
        Series {
            label: "mean + ci".into(),
            xs: res.times.clone(),
            ys: upper,
        },
    ]
}

fn bound_table(res: &EnsembleResult<f64>, rows: &[usize], bound: &[f64], report: &BoundReport<f64>) -> Table {
    let mut t = Table::new(&["t", "mean_h_sq", "ci_half_width", "bound", "margin"]);
    for ((&k, &b), mg) in rows.iter().zip(bound).zip(report.row_margins()) {
        t.push(vec![res.times[k].into(), res.mean_h_sq[k].into(), res.ci_half_width[k].into(), b.into(), mg.into()]);
    }
    t
}

fn bound_plot(title: &str, report: &BoundReport<f64>) -> (String, String, Vec<Series>) {
    (
        title.into(),
        "t".into(),
        vec![
            Series {
                label: "measured".into(),
                xs: report.times.clone(),
                ys: report.measured.clone(),
            },
            Series {
                label: "bound".into(),
                xs: report.times.clone(),
                ys: report.bound.clone(),
            },
        ],
    )
}

/// Ensemble second moment against `e^{-rate(t-τ)}E0 + K₁/rate + K₂·window`,
/// with `E0 = ‖D(τ)‖₊²`.
fn decay(m: &Manifest, threads: usize) -> Result<Artifacts, CliError> {
    let model = m.model()?;
    let c = constants(m, &model)?;
    let family = m.family_spec();
    let e0 = family.family_norm(m.time.tau).value;
    let res = run_ensemble(&model, &family, &ensemble_config(m, threads, false))?;
    let rows: Vec<usize> = (0..res.times.len()).collect();
    let bound = res
        .times
        .iter()
        .map(|&t| decay_bound(t, m.time.tau, e0, &model, &c))
        .collect::<Result<Vec<_>, _>>()?;
    let report = BoundReport::new(res.times.clone(), bound.clone(), res.mean_h_sq.clone(), res.ci_half_width.clone());
    let mut art = Artifacts::new(bound_table(&res, &rows, &bound, &report));
    art.verdicts.push(Verdict::from_report("decay_bound", &report));
    art.details.insert("initial_energy_bound".into(), json!(e0));
    art.plot = Some(bound_plot("decay bound", &report));
    art.constants = Some(c);
    Ok(art)
}

/// Ensemble second moment against `R(t)` once the family has entered,
/// i.e. for `t - τ ≥ ln(‖D(τ)‖₊²)/rate`.
fn absorb(m: &Manifest, threads: usize) -> Result<Artifacts, CliError> {
    let model = m.model()?;
    let c = constants(m, &model)?;
    let family = m.family_spec();
    let d_sq = family.family_norm(m.time.tau).value;
    let entry = if d_sq > 1.0 { d_sq.ln() / c.rate } else { 0.0 };
    let res = run_ensemble(&model, &family, &ensemble_config(m, threads, false))?;
    let rows: Vec<usize> = (0..res.times.len()).filter(|&k| res.times[k] - m.time.tau >= entry).collect();
    let bound = rows
        .iter()
        .map(|&k| absorbing_radius(res.times[k], &model, &c))
        .collect::<Result<Vec<_>, _>>()?;
    let report = BoundReport::new(
        rows.iter().map(|&k| res.times[k]).collect(),
        bound.clone(),
        rows.iter().map(|&k| res.mean_h_sq[k]).collect(),
        rows.iter().map(|&k| res.ci_half_width[k]).collect(),
    );
    let mut art = Artifacts::new(bound_table(&res, &rows, &bound, &report));
    art.verdicts.push(Verdict::new("absorbed_rows_present", !rows.is_empty(), None));
    art.verdicts.push(Verdict::from_report("absorbing_radius", &report));
    art.details.insert("entry_offset".into(), json!(entry));
    art.plot = Some(bound_plot("absorbing radius", &report));
    art.constants = Some(c);
    Ok(art)
}

fn entry(m: &Manifest, threads: usize) -> Result<Artifacts, CliError> {
    let model = m.model()?;
    let c = constants(m, &model)?;
    let sim = EntrySimulation {
        dt: m.time.dt,
        paths: m.paths,
        master_seed: m.seed,
        cap: m.entry_cap,
        threads,
    };
    let e = pullback_entry_time(m.entry_t, &m.family_spec(), &model, &c, &sim)?;
    let mut art = Artifacts::new(Table::new(&["s", "mean_h_sq_at_t", "radius", "absorbed"]));
    for r in &e.rows {
        art.table.push(vec![r.s.into(), r.mean_h_sq_at_t.into(), r.radius.into(), r.absorbed.into()]);
    }
    art.verdicts.push(Verdict::new(
        "entry_within_one_step",
        e.within_one_step(),
        e.measured.zip(e.next_grid_value).map(|(a, b)| a - b),
    ));
    art.verdicts.push(Verdict::from_report("absorbed_after_entry", &e.report));
    art.details.insert("t".into(), json!(m.entry_t));
    art.details.insert("theoretical_entry".into(), json!(e.theoretical));
    art.details.insert("measured_entry".into(), json!(e.measured));
    art.details.insert("next_grid_value".into(), json!(e.next_grid_value));
    art.plot = Some((
        "pullback entry".into(),
        "s".into(),
        vec![
            Series {
                label: "mean |u(t)|^2".into(),
                xs: e.rows.iter().map(|r| r.s).collect(),
                ys: e.rows.iter().map(|r| r.mean_h_sq_at_t).collect(),
            },
            Series {
                label: "radius".into(),
                xs: e.rows.iter().map(|r| r.s).collect(),
                ys: e.rows.iter().map(|r| r.radius).collect(),
            },
        ],
    ));
    art.constants = Some(c);
    Ok(art)
}

/// Steady state, its residual, a re-simulation from it, and `‖z‖² ≤ R(τ)`.
fn steady(m: &Manifest) -> Result<Artifacts, CliError> {
    let model = m.model()?;
    let z = steady_state(&model)?;
    let residual = steady_residual(&model, &z)?;
    let traj = simulate_path(&model, &z, m.time.tau, m.time.end, m.time.dt, None)?;
    let mut art = Artifacts::new(Table::new(&["t", "h_sq", "deviation"]));
    let mut drift = 0.0f64;
    let last = traj.len() - 1;
    for (k, s) in traj.states.iter().enumerate() {
        let d = s.sub(&z).norm_sq().sqrt();
        drift = drift.max(d);
        if k % m.time.record_every == 0 || k == last {
            art.table.push(vec![traj.times[k].into(), traj.h_sq[k].into(), d.into()]);
        }
    }
    let z_sq = z.norm_sq();
    art.verdicts.push(Verdict::new("residual", residual <= STEADY_TOL, Some(residual - STEADY_TOL)));
    art.verdicts.push(Verdict::new("resimulation_hold", drift <= HOLD_TOL, Some(drift - HOLD_TOL)));
    art.details.insert("state".into(), json!(z.coeffs()));
    art.details.insert("h_sq".into(), json!(z_sq));
    art.details.insert("residual".into(), json!(residual));
    art.details.insert("max_deviation".into(), json!(drift));
    match constants(m, &model) {
        Ok(c) => {
            let mut radii = Vec::new();
            for tau in STEADY_RADIUS_TIMES {
                let r = absorbing_radius(tau, &model, &c)?;
                radii.push(json!({"tau": tau, "radius": r}));
                art.verdicts.push(Verdict::new(&format!("inside_radius_at_{tau}"), z_sq <= r, Some(z_sq - r)));
            }
            art.details.insert("radii".into(), Value::Array(radii));
            art.constants = Some(c);
        }
        Err(e) => {
            art.details.insert("radii".into(), json!(e.to_string()));
        }
    }
    Ok(art)
}

/// Closed-form comparison for linear models: exact modes in the
/// deterministic case, the second-moment ODE in the stochastic one.
fn oracle(m: &Manifest, threads: usize) -> Result<Artifacts, CliError> {
    let model = m.model()?;
    let ReactionPreset::Linear { slope } = m.reaction else {
        return Err(Error::InvalidConfiguration("oracle comparison needs a linear reaction".into()).into());
    };
    let NonlocalCoefficient::Constant(a) = m.nonlocal else {
        return Err(Error::InvalidConfiguration("oracle comparison needs a constant coefficient".into()).into());
    };
    if !m.forcing.is_autonomous() || m.forcing.norm_sq(0.0) != 0.0 {
        return Err(Error::InvalidConfiguration("oracle comparison needs zero forcing".into()).into());
    }
    let family = m.family_spec();
    let FamilySpec::Point(u0) = &family else {
        return Err(Error::InvalidConfiguration("oracle comparison needs a point family".into()).into());
    };
    let rates: Vec<f64> = model.basis().eigenvalues().iter().map(|&l| slope - a * l).collect();
    let tau = m.time.tau;
    let dt = m.time.dt;
    let mut art;
    match model.regime() {
        Regime::DeterministicRandom => {
            let traj = simulate_path(&model, u0, tau, m.time.end, dt, None)?;
            art = Artifacts::new(Table::new(&["t", "h_sq", "exact_h_sq", "error"]));
            let (mut xs, mut sim, mut exact) = (Vec::new(), Vec::new(), Vec::new());
            let mut worst = 0.0f64;
            let last = traj.len() - 1;
            for (k, s) in traj.states.iter().enumerate() {
                let t = traj.times[k];
                let ex: Vec<f64> = u0.coeffs().iter().zip(&rates).map(|(g, r)| g * (r * (t - tau)).exp()).collect();
                let err = s.coeffs().iter().zip(&ex).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                worst = worst.max(err);
                let ex_sq: f64 = ex.iter().map(|x| x * x).sum();
                if k % m.time.record_every == 0 || k == last {
                    art.table.push(vec![t.into(), traj.h_sq[k].into(), ex_sq.into(), err.into()]);
                    xs.push(t);
                    sim.push(traj.h_sq[k]);
                    exact.push(ex_sq);
                }
            }
            art.verdicts.push(Verdict::new("exact_solution", worst <= 2.0 * dt, Some(worst - 2.0 * dt)));
            art.details.insert("max_error".into(), json!(worst));
            art.plot = Some(oracle_plot(xs, sim, exact));
        }
        Regime::Stochastic => {
            let Noise::Affine { lipschitz: c, at_zero } = m.sigma else {
                return Err(Error::InvalidConfiguration("oracle comparison needs linear noise".into()).into());
            };
            if at_zero != 0.0 {
                return Err(Error::InvalidConfiguration("oracle comparison needs sigma(0) = 0".into()).into());
            }
            let res = run_ensemble(&model, &family, &ensemble_config(m, threads, true))?;
            let residual = res.residual.as_ref().expect("residual was tracked");
            let exact: Vec<f64> = res
                .times
                .iter()
                .map(|&t| {
                    u0.coeffs()
                        .iter()
                        .zip(&rates)
                        .map(|(g, r)| g * g * ((2.0 * r + c * c) * (t - tau)).exp())
                        .sum()
                })
                .collect();
            art = Artifacts::new(Table::new(&[
                "t",
                "mean_h_sq",
                "ci_half_width",
                "exact_h_sq",
                "error",
                "residual_mean",
                "residual_ci",
            ]));
            let mut energy_margin = f64::NEG_INFINITY;
            for k in 0..res.times.len() {
                let err = res.mean_h_sq[k] - exact[k];
                energy_margin = energy_margin.max(residual.mean[k].abs() - residual.ci_half_width[k]);
                art.table.push(vec![
                    res.times[k].into(),
                    res.mean_h_sq[k].into(),
                    res.ci_half_width[k].into(),
                    exact[k].into(),
                    err.into(),
                    residual.mean[k].into(),
                    residual.ci_half_width[k].into(),
                ]);
            }
            let k = res.times.len() - 1;
            let moment_margin = (res.mean_h_sq[k] - exact[k]).abs() - (res.ci_half_width[k] + 3.0 * dt);
            art.verdicts.push(Verdict::new("moment_oracle", moment_margin <= 0.0, Some(moment_margin)));
            art.verdicts.push(Verdict::new("energy_identity", energy_margin <= 0.0, Some(energy_margin)));
            art.details.insert("final_mean_h_sq".into(), json!(res.mean_h_sq[k]));
            art.details.insert("final_exact_h_sq".into(), json!(exact[k]));
            art.details.insert("final_ci_half_width".into(), json!(res.ci_half_width[k]));
            art.details.insert("paths".into(), json!(res.path_count));
            art.plot = Some(oracle_plot(res.times.clone(), res.mean_h_sq.clone(), exact));
        }
    }
    Ok(art)
}

fn oracle_plot(xs: Vec<f64>, sim: Vec<f64>, exact: Vec<f64>) -> (String, String, Vec<Series>) {
    (
        "oracle comparison".into(),
        "t".into(),
        vec![
            Series {
                label: "simulated".into(),
                xs: xs.clone(),
                ys: sim,
            },
            Series {
                label: "exact".into(),
                xs,
                ys: exact,
            },
        ],
    )
}

