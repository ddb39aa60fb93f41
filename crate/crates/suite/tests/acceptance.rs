use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use mra::{parse_manifest, run_experiment, Kind, RunOptions};
use mra_core::ensemble::{run_ensemble, EnsembleConfig, FamilySpec, RadiusProfile};
use mra_core::integrate::{simulate_path, CounterStream, StreamPurpose};
use mra_core::lab::{
    absorbing_radius, decay_bound, derive_constants, pullback_entry_time, radius_boundedness, steady_residual,
    steady_state, BoundReport, EntrySimulation, RadiusClass, RateChoice,
};
use mra_core::model::{
    validate_params, DeclaredConstants, Forcing, Model, ModelParams, Noise, NonlocalCoefficient, Reaction, Regime,
};
use mra_core::spectral::{Basis, SpectralState};

/// Written to the raw handle so the line survives libtest's output capture.
fn report(n: u32, pass: bool, detail: String) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" }).unwrap();
    out.flush().unwrap();
}

fn within(elapsed: Duration, secs: u64) -> bool {
    elapsed <= Duration::from_secs(secs)
}

fn model(
    n: usize,
    regime: Regime,
    a: NonlocalCoefficient<f64>,
    f: Reaction<f64>,
    declared: DeclaredConstants<f64>,
    noise: Noise<f64>,
    h: Forcing<f64>,
    rate: f64,
) -> Model<f64> {
    Model::new(
        Basis::with_default_grid(PI, n).unwrap(),
        ModelParams {
            regime,
            nonlocal: a,
            reaction: f,
            declared,
            noise,
            forcing: h,
            rate,
        },
    )
    .unwrap()
}

fn det(n: usize, a: NonlocalCoefficient<f64>, f: Reaction<f64>, h: Forcing<f64>, rate: f64) -> Model<f64> {
    model(n, Regime::DeterministicRandom, a, f, DeclaredConstants::none(), Noise::Zero, h, rate)
}

fn sto(n: usize, a: NonlocalCoefficient<f64>, f: Reaction<f64>, s: Noise<f64>, h: Forcing<f64>, rate: f64) -> Model<f64> {
    model(n, Regime::Stochastic, a, f, DeclaredConstants::none(), s, h, rate)
}

/// Random state with `1/j` decay, drawn from a counter stream.
fn random_state(stream: &CounterStream, index: u64, n: usize, scale: f64) -> SpectralState<f64> {
    SpectralState::new(
        (0..n)
            .map(|j| scale * stream.normal(index * n as u64 + j as u64) / (j + 1) as f64)
            .collect(),
    )
}

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * (1.0 + want.abs())
}

/// Same log-spaced points as the checker, rebuilt here.
fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..n).map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)).collect()
}

#[test]
fn criterion_01_assumption_gate() {
    let start = Instant::now();
    let h0 = || Forcing::Constant { modes: vec![1.0, 0.5] };
    let gamma4_low = DeclaredConstants {
        gamma4: Some(0.1),
        ..DeclaredConstants::none()
    };
    // (label, model, violated check, oracle margin of that check)
    let presets: Vec<(&str, Model<f64>, Option<&str>, Option<f64>)> = vec![
        (
            "saturating cubic",
            det(4, NonlocalCoefficient::Saturating { m: 1.0, big_m: 2.0 }, Reaction::Cubic { eta: 1.0, kappa: 1.0 }, h0(), 1.0),
            None,
            None,
        ),
        (
            "decreasing linear",
            det(
                4,
                NonlocalCoefficient::Decreasing { m: 0.5, big_m: 2.0 },
                Reaction::Linear { slope: -1.0 },
                Forcing::Exponential { nu: 0.1, modes: vec![1.0] },
                0.5,
            ),
            None,
            None,
        ),
        (
            "stochastic affine",
            sto(4, NonlocalCoefficient::Constant(2.0), Reaction::Linear { slope: 0.2 }, Noise::Affine { lipschitz: 0.3, at_zero: 0.1 }, h0(), 1.0),
            None,
            None,
        ),
        (
            "stochastic sine",
            sto(
                4,
                NonlocalCoefficient::Saturating { m: 1.5, big_m: 3.0 },
                Reaction::Tanh { gain: 0.5 },
                Noise::Sine { amplitude: 0.2 },
                Forcing::Zero,
                0.5,
            ),
            None,
            None,
        ),
        (
            "growing linear",
            det(4, NonlocalCoefficient::Constant(1.0), Reaction::Linear { slope: 0.5 }, Forcing::Zero, 1.0),
            Some("dissipativity"),
            Some(-0.5),
        ),
        (
            "steep decreasing",
            det(4, NonlocalCoefficient::Decreasing { m: 1.0, big_m: 20.0 }, Reaction::Cubic { eta: 1.0, kappa: 1.0 }, h0(), 1.0),
            Some("coefficient_monotonicity"),
            {
                let a = |s: f64| 1.0 + 19.0 / (1.0 + s);
                let g = |s: f64| a(s * s) * s;
                let mut pts = vec![0.0];
                pts.extend(logspace(1e-6, 1e6, 9999));
                Some(pts.windows(2).map(|w| g(w[1]) - g(w[0])).fold(f64::INFINITY, f64::min))
            },
        ),
        (
            "understated gamma4",
            model(
                4,
                Regime::Stochastic,
                NonlocalCoefficient::Constant(2.0),
                Reaction::Linear { slope: 0.2 },
                gamma4_low,
                Noise::Affine { lipschitz: 0.3, at_zero: 0.0 },
                h0(),
                1.0,
            ),
            Some("quadratic_dissipativity"),
            // γ₃ + γ₄r² - f(r)r = -0.1r², smallest at the largest sample |r| = 1e3
            Some(-0.1 * 1e6),
        ),
        (
            "noise too strong",
            sto(4, NonlocalCoefficient::Constant(1.0), Reaction::Linear { slope: 0.2 }, Noise::Affine { lipschitz: 0.6, at_zero: 0.0 }, Forcing::Zero, 0.4),
            Some("noise_balance"),
            Some(0.5 - 0.2 - 0.36),
        ),
    ];

    let mut ok = true;
    let mut notes = Vec::new();
    for (label, m, violated, margin) in &presets {
        let r = validate_params(m);
        let failed: Vec<&str> = r.failures().map(|c| c.name).collect();
        let expected: Vec<&str> = violated.iter().copied().collect();
        if failed != expected {
            ok = false;
            notes.push(format!("{label}: failed {failed:?}, designed {expected:?}"));
        }
        if let (Some(name), Some(want)) = (violated, margin) {
            let got = r.get(name).and_then(|c| c.margin).unwrap_or(f64::NAN);
            if !close(got, *want, 1e-12) {
                ok = false;
                notes.push(format!("{label}: {name} margin {got} vs {want}"));
            }
        }
        // rate margin: min(rate, upper - rate)
        let p = m.params();
        let lo = p.nonlocal.lower();
        let upper = match p.regime {
            Regime::DeterministicRandom => 2.0 * lo,
            Regime::Stochastic => {
                let g4 = p.growth_constants().unwrap().0.gamma4;
                let c = p.noise.lipschitz();
                let balance = lo / 2.0 - g4 - c * c;
                let got = r.get("noise_balance").and_then(|c| c.margin).unwrap();
                if !close(got, balance, 1e-12) {
                    ok = false;
                    notes.push(format!("{label}: noise_balance margin {got} vs {balance}"));
                }
                2.0 * (lo - g4 - c * c)
            }
        };
        let want = p.rate.min(upper - p.rate);
        let got = r.get("rate_admissible").and_then(|c| c.margin).unwrap();
        if !close(got, want, 1e-12) {
            ok = false;
            notes.push(format!("{label}: rate margin {got} vs {want}"));
        }
    }
    let elapsed = start.elapsed();
    ok &= within(elapsed, 1);
    report(1, ok, format!("{} presets in {elapsed:.2?} {notes:?}", presets.len()));
    assert!(ok);
}

fn heat_error(dt: f64) -> f64 {
    let m = det(1, NonlocalCoefficient::Constant(1.0), Reaction::Linear { slope: 0.0 }, Forcing::Zero, 1.0);
    let traj = simulate_path(&m, &SpectralState::new(vec![1.0]), 0.0, 1.0, dt, None).unwrap();
    (traj.final_state().unwrap().coeffs()[0] - (-1.0f64).exp()).abs()
}

#[test]
fn criterion_02_heat_mode_oracle() {
    let start = Instant::now();
    let dts = [1e-2, 1e-3, 1e-4];
    let errs: Vec<f64> = dts.iter().map(|&dt| heat_error(dt)).collect();
    let orders: Vec<f64> = errs.windows(2).zip(dts.windows(2)).map(|(e, d)| (e[0] / e[1]).ln() / (d[0] / d[1]).ln()).collect();
    let elapsed = start.elapsed();
    let ok = dts.iter().zip(&errs).all(|(&dt, &e)| e <= 2.0 * dt)
        && orders.iter().all(|o| (0.9..=1.1).contains(o))
        && within(elapsed, 5);
    report(2, ok, format!("errors {errs:?} orders {orders:?} in {elapsed:.2?}"));
    assert!(ok);
}

fn coefficient_families() -> Vec<NonlocalCoefficient<f64>> {
    vec![
        NonlocalCoefficient::Constant(1.3),
        NonlocalCoefficient::Saturating { m: 0.5, big_m: 4.0 },
        NonlocalCoefficient::Decreasing { m: 1.0, big_m: 9.0 },
    ]
}

fn stochastic_families(n: usize) -> Vec<Model<f64>> {
    let h = Forcing::Constant { modes: vec![1.0, -0.5, 0.25] };
    let mut out = Vec::new();
    for (i, a) in coefficient_families().into_iter().enumerate() {
        let (f, s) = match i {
            0 => (Reaction::Linear { slope: 0.4 }, Noise::Affine { lipschitz: 0.3, at_zero: 0.2 }),
            1 => (Reaction::Tanh { gain: 1.0 }, Noise::Sine { amplitude: 0.5 }),
            _ => (Reaction::Tanh { gain: -0.7 }, Noise::Affine { lipschitz: 0.1, at_zero: -0.3 }),
        };
        out.push(sto(n, a, f, s, h.clone(), 0.2));
    }
    out
}

#[test]
fn criterion_03_monotonicity_suite() {
    let start = Instant::now();
    let n = 32;
    let pairs = 1000u64;
    let stream = CounterStream::new(3, StreamPurpose::Initial, 0);
    let (mut worst_gap, mut worst_excess) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut bad = 0usize;
    for (fam, a) in coefficient_families().into_iter().enumerate() {
        let m = det(n, a, Reaction::Linear { slope: 0.0 }, Forcing::Zero, 0.5);
        for k in 0..pairs {
            let base = (fam as u64 * pairs + k) * 2;
            let scale = 10f64.powf(stream.uniform(base) * 4.0 - 2.0);
            let u = random_state(&stream, base, n, scale);
            let v = random_state(&stream, base + 1, n, scale);
            let gap = m.nonlocal_monotone_gap(&u, &v).unwrap();
            worst_gap = worst_gap.min(gap);
            bad += usize::from(gap < -1e-10);
        }
    }
    let stream = CounterStream::new(4, StreamPurpose::Initial, 0);
    for (fam, m) in stochastic_families(n).iter().enumerate() {
        for k in 0..pairs {
            let base = (fam as u64 * pairs + k) * 2;
            let scale = 10f64.powf(stream.uniform(base) * 4.0 - 2.0);
            let u = random_state(&stream, base, n, scale);
            let v = random_state(&stream, base + 1, n, scale);
            let e = m.weak_monotone_excess(&u, &v, 0.0).unwrap();
            worst_excess = worst_excess.max(e);
            bad += usize::from(e > 1e-10);
        }
    }
    let elapsed = start.elapsed();
    let ok = bad == 0 && within(elapsed, 10);
    report(3, ok, format!("min gap {worst_gap:e}, max excess {worst_excess:e}, violations {bad}, {elapsed:.2?}"));
    assert!(ok);
}

#[test]
fn criterion_04_operator_lemma() {
    let start = Instant::now();
    let n = 32;
    let stream = CounterStream::new(5, StreamPurpose::Initial, 0);
    let models = stochastic_families(n);
    let (mut coercive, mut dual) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut bad = 0usize;
    for k in 0..1000u64 {
        let m = &models[(k % models.len() as u64) as usize];
        let scale = 10f64.powf(stream.uniform(k) * 4.0 - 2.0);
        let u = random_state(&stream, k + 1, n, scale);
        let p = m.coercivity_and_boundedness_probe(&u, 0.0).unwrap();
        let d = p.dual_norm_excess.unwrap_or(f64::INFINITY);
        coercive = coercive.max(p.coercive_excess);
        dual = dual.max(d);
        bad += usize::from(p.coercive_excess > 1e-10 || d > 1e-10);
    }
    let elapsed = start.elapsed();
    let ok = bad == 0 && within(elapsed, 10);
    report(4, ok, format!("max coercive excess {coercive:e}, max dual excess {dual:e}, violations {bad}, {elapsed:.2?}"));
    assert!(ok);
}

const LINEAR_TEST: &str = r#"
kind = "oracle-compare"
[basis]
modes = 1
[model]
regime = "stochastic"
rate = 0.5
[nonlocal]
preset = "constant"
value = 1
[reaction]
preset = "linear"
slope = 0.2
[sigma]
preset = "affine"
lipschitz = 0.3
at_zero = 0
[time]
end = 1
dt = 1e-3
record_every = 50
[ensemble]
paths = 10000
seed = 20240601
[family]
shape = "point"
modes = [1.0]
"#;

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn read(path: &Path) -> (String, Self) {
        let text = std::fs::read_to_string(path).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap().split(',').map(String::from).collect();
        let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
        (text, Self { header, rows })
    }

    fn col(&self, name: &str) -> Vec<f64> {
        let i = self.header.iter().position(|h| h == name).unwrap();
        self.rows.iter().map(|r| r[i]).collect()
    }
}

struct LinearRun {
    csv: String,
    table: Table,
    elapsed: Duration,
}

fn run_linear(threads: usize) -> LinearRun {
    let dir = tempfile::tempdir().unwrap();
    let manifest = parse_manifest(LINEAR_TEST).unwrap();
    let opts = RunOptions {
        threads,
        seed: None,
        out: Some(dir.path().to_path_buf()),
    };
    let start = Instant::now();
    run_experiment(&manifest, Kind::OracleCompare, &opts).unwrap();
    let elapsed = start.elapsed();
    let (csv, table) = Table::read(&dir.path().join("results.csv"));
    LinearRun { csv, table, elapsed }
}

fn linear_run() -> &'static LinearRun {
    static RUN: OnceLock<LinearRun> = OnceLock::new();
    RUN.get_or_init(|| run_linear(1))
}

#[test]
fn criterion_05_moment_oracle() {
    let run = linear_run();
    let (m, g4, c, dt) = (1.0, 0.2, 0.3, 1e-3);
    // d/dt E‖u‖² = (2γ₄ - 2mλ₁ + C²) E‖u‖² for the linear test
    let exact = ((2.0 * g4 - 2.0 * m + c * c) * 1.0f64).exp();
    let mean = *run.table.col("mean_h_sq").last().unwrap();
    let ci = *run.table.col("ci_half_width").last().unwrap();
    let err = (mean - exact).abs();
    let ok = err <= ci + 3.0 * dt && within(run.elapsed, 120);
    report(5, ok, format!("E|u(1)|^2 = {mean:.6} vs {exact:.6}, |err| {err:.2e} <= {:.2e}, {:.2?}", ci + 3.0 * dt, run.elapsed));
    assert!(ok);
}

#[test]
fn criterion_06_ito_energy_identity() {
    let run = linear_run();
    let t = run.table.col("t");
    let mean = run.table.col("residual_mean");
    let ci = run.table.col("residual_ci");
    let misses: Vec<f64> = t
        .iter()
        .zip(mean.iter().zip(&ci))
        .filter(|(_, (m, c))| m.abs() > **c)
        .map(|(&t, _)| t)
        .collect();
    let (last_mean, last_ci) = (*mean.last().unwrap(), *ci.last().unwrap());
    let ok = misses.is_empty();
    report(
        6,
        ok,
        format!(
            "{} of {} recorded times outside the CI; final residual {last_mean:.3e} +/- {last_ci:.3e}",
            misses.len(),
            t.len()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_07_decay_bound_dominance() {
    let start = Instant::now();
    let n = 3;
    let pick = CounterStream::new(7, StreamPurpose::Initial, 99);
    let mut u = 0u64;
    let mut next = || {
        u += 1;
        pick.uniform(u)
    };
    let (mut presets, mut violations, mut worst) = (0usize, 0usize, f64::NEG_INFINITY);
    let mut rejected = 0usize;
    while presets < 20 {
        let m = 0.5 + 1.5 * next();
        let a = match (next() * 3.0) as usize {
            0 => NonlocalCoefficient::Constant(m),
            1 => NonlocalCoefficient::Saturating { m, big_m: m * (1.0 + 4.0 * next()) },
            _ => NonlocalCoefficient::Decreasing { m, big_m: m * (1.0 + 8.0 * next()) },
        };
        let f = if next() < 0.5 {
            Reaction::Linear { slope: 2.0 * next() - 1.0 }
        } else {
            Reaction::Tanh { gain: 2.0 * next() - 1.0 }
        };
        let s = if next() < 0.5 {
            Noise::Affine { lipschitz: 0.6 * next(), at_zero: next() - 0.5 }
        } else {
            Noise::Sine { amplitude: 0.6 * next() }
        };
        let h = Forcing::Constant { modes: (0..n).map(|_| 2.0 * next() - 1.0).collect() };
        let eps = 0.2 + 0.6 * next();
        let radius = 0.5 + 2.5 * next();
        let probe = sto(n, a, f.clone(), s, h.clone(), 1.0);
        let Ok(c) = derive_constants(&probe, RateChoice::Epsilon(eps)) else {
            rejected += 1;
            continue;
        };
        let model = sto(n, a, f, s, h, c.rate);
        if !validate_params(&model).all_pass() {
            rejected += 1;
            continue;
        }
        presets += 1;
        let family = FamilySpec::Ball(RadiusProfile::Constant { radius });
        let mut cfg = EnsembleConfig::new(0.0, 2.0, 2e-3, 1000, 700 + presets as u64);
        cfg.record_every = 25;
        let res = run_ensemble(&model, &family, &cfg).unwrap();
        let e0 = family.family_norm(0.0).value;
        let bound = res.times.iter().map(|&t| decay_bound(t, 0.0, e0, &model, &c).unwrap()).collect();
        let r = BoundReport::new(res.times.clone(), bound, res.mean_h_sq.clone(), res.ci_half_width.clone());
        violations += r.row_margins().iter().filter(|&&x| x > 0.0).count();
        worst = worst.max(r.margin);
    }
    let elapsed = start.elapsed();
    let ok = violations == 0 && within(elapsed, 600);
    report(
        7,
        ok,
        format!("{presets} presets ({rejected} draws rejected), violations {violations}, worst margin {worst:.3e}, {elapsed:.2?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_08_entry_time() {
    let start = Instant::now();
    let model = sto(4, NonlocalCoefficient::Constant(2.0), Reaction::Linear { slope: 0.2 }, Noise::Affine { lipschitz: 0.3, at_zero: 0.0 }, Forcing::Zero, 1.0);
    let c = derive_constants(&model, RateChoice::Rate(1.0)).unwrap();
    let family = FamilySpec::Ball(RadiusProfile::AffineAbs { base: 10.0, slope: 10.0 });
    let sim = EntrySimulation {
        dt: 1e-3,
        paths: 500,
        master_seed: 8,
        cap: 8.0,
        threads: 0,
    };
    let e = pullback_entry_time(0.0, &family, &model, &c, &sim).unwrap();
    // 10(1 + s) = e^s by bisection
    let (mut lo, mut hi) = (1.0f64, 10.0f64);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if 10.0 * (1.0 + mid) > mid.exp() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let oracle = 0.5 * (lo + hi);
    let elapsed = start.elapsed();
    let ok = (e.theoretical - oracle).abs() <= 1e-6 && e.within_one_step() && e.report.pass && within(elapsed, 300);
    report(
        8,
        ok,
        format!(
            "T = {:.6} (oracle {oracle:.6}), measured {:?}, next grid value {:?}, {elapsed:.2?}",
            e.theoretical, e.measured, e.next_grid_value
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_09_radius_classification() {
    let start = Instant::now();
    let rate = 1.0;
    let constant = radius_boundedness(&Forcing::Constant { modes: vec![1.0, 2.0] }, rate, 0.0).unwrap();
    let growing = radius_boundedness(&Forcing::Exponential { nu: 0.1, modes: vec![1.0] }, rate, 0.0).unwrap();
    let poly = radius_boundedness(&Forcing::Polynomial { coeffs: vec![1.0, 1.0], modes: vec![1.0] }, rate, 0.0).unwrap();
    let elapsed = start.elapsed();
    let ok = constant == RadiusClass::BoundedEverywhere { sup: 5.0 }
        && matches!(growing, RadiusClass::BoundedBackwards { .. })
        && poly == RadiusClass::Unbounded
        && within(elapsed, 1);
    report(9, ok, format!("{constant:?}, {growing:?}, {poly:?}"));
    assert!(ok);
}

const STEADY: &str = r#"
kind = "steady"
[basis]
modes = 8
[model]
regime = "deterministic"
rate = 1.0
[nonlocal]
preset = "saturating"
m = 1.0
M = 3.0
[reaction]
preset = "linear"
slope = 0.5
[forcing]
kind = "constant"
modes = [2.0]
[time]
tau = 0
end = 10
dt = 1e-2
record_every = 100
"#;

#[test]
fn criterion_10_steady_state() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let manifest = parse_manifest(STEADY).unwrap();
    let opts = RunOptions {
        out: Some(dir.path().to_path_buf()),
        ..RunOptions::default()
    };
    let out = run_experiment(&manifest, Kind::Steady, &opts).unwrap();
    let model = manifest.model().unwrap();
    let z = steady_state(&model).unwrap();
    let residual = steady_residual(&model, &z).unwrap();

    // a(z²)z - 0.5z = 2 on the first mode, by bisection
    let a = NonlocalCoefficient::Saturating { m: 1.0, big_m: 3.0 };
    let g = |x: f64| a.value(x * x) * x - 0.5 * x - 2.0;
    let (mut lo, mut hi) = (0.0f64, 10.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let scalar = 0.5 * (lo + hi);
    let match_err = z
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, &x)| (x - if j == 0 { scalar } else { 0.0 }).abs())
        .fold(0.0, f64::max);

    let traj = simulate_path(&model, &z, 0.0, 10.0, 1e-2, None).unwrap();
    let hold = traj.states.iter().map(|s| s.sub(&z).norm_sq().sqrt()).fold(0.0, f64::max);
    let c = derive_constants(&model, RateChoice::Rate(1.0)).unwrap();
    let radii: Vec<f64> = [-10.0, 0.0, 10.0].iter().map(|&tau| absorbing_radius(tau, &model, &c).unwrap()).collect();
    let inside = radii.iter().all(|&r| z.norm_sq() <= r);
    let elapsed = start.elapsed();

    let ok = residual <= 1e-10 && match_err <= 1e-10 && hold <= 1e-8 && inside && out.pass && within(elapsed, 10);
    report(
        10,
        ok,
        format!(
            "residual {residual:.2e}, oracle gap {match_err:.2e}, hold {hold:.2e}, |z|^2 = {:.4} vs R = {radii:?}, cli verdict {}",
            z.norm_sq(),
            out.pass
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_11_reproducibility() {
    let first = linear_run();
    let again = run_linear(1);
    let eight = run_linear(8);
    let ok = !first.csv.is_empty() && first.csv == again.csv && first.csv == eight.csv;
    report(
        11,
        ok,
        format!(
            "{} bytes, rerun identical = {}, 8 threads identical = {}",
            first.csv.len(),
            first.csv == again.csv,
            first.csv == eight.csv
        ),
    );
    assert!(ok);
}
