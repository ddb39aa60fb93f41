use std::path::Path;
use std::process::Command;

use mra::{parse_manifest, run_experiment, CliError, Kind, RunOptions};

const DECAY: &str = r#"
kind = "decay"
[basis]
modes = 3
[model]
regime = "stochastic"
epsilon = 0.5
[nonlocal]
preset = "saturating"
m = 1.0
M = 2.0
[reaction]
preset = "tanh"
gain = 0.4
[sigma]
preset = "sine"
amplitude = 0.2
[forcing]
kind = "constant"
modes = [0.5, 0.25]
[time]
end = 0.5
dt = 1e-2
record_every = 10
[ensemble]
paths = 200
seed = 3
[family]
shape = "ball"
profile = "constant"
radius = 2.0
"#;

const NOISY: &str = r#"
kind = "check"
[basis]
modes = 2
[model]
regime = "stochastic"
rate = 0.4
[nonlocal]
preset = "constant"
value = 1.0
[reaction]
preset = "linear"
slope = 0.2
[sigma]
preset = "affine"
lipschitz = 0.6
"#;

fn opts(dir: &Path) -> RunOptions {
    RunOptions {
        out: Some(dir.to_path_buf()),
        ..RunOptions::default()
    }
}

#[test]
fn manifest_round_trips_through_toml() {
    let m = parse_manifest(DECAY).unwrap();
    let again = parse_manifest(&m.to_toml()).unwrap();
    assert_eq!(m, again);
}

#[test]
fn misspelled_key_is_reported_by_name() {
    let text = NOISY.replace("lipschitz = 0.6", "lipshitz = 0.6");
    let err = parse_manifest(&text).unwrap_err();
    assert!(err.keys().any(|k| k == "sigma.lipshitz"), "{err}");
}

#[test]
fn zero_step_is_rejected() {
    let text = DECAY.replace("dt = 1e-2", "dt = 0");
    let err = parse_manifest(&text).unwrap_err();
    assert!(err.keys().any(|k| k == "time.dt"), "{err}");
    assert_eq!(CliError::Manifest(err).exit_code(), 2);
}

#[test]
fn kind_mismatch_is_a_configuration_error() {
    let m = parse_manifest(DECAY).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let err = run_experiment(&m, Kind::Steady, &opts(dir.path())).unwrap_err();
    assert!(matches!(err, CliError::KindMismatch { .. }));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn reruns_are_byte_identical() {
    let m = parse_manifest(DECAY).unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_experiment(&m, Kind::Decay, &opts(a.path())).unwrap();
    run_experiment(&m, Kind::Decay, &opts(b.path())).unwrap();
    for name in ["results.csv", "summary.json"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
}

#[test]
fn seed_override_changes_the_estimate() {
    let m = parse_manifest(DECAY).unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_experiment(&m, Kind::Decay, &opts(a.path())).unwrap();
    let mut o = opts(b.path());
    o.seed = Some(4);
    run_experiment(&m, Kind::Decay, &o).unwrap();
    let x = std::fs::read(a.path().join("results.csv")).unwrap();
    let y = std::fs::read(b.path().join("results.csv")).unwrap();
    assert_ne!(x, y);
}

#[test]
fn decay_csv_schema() {
    let m = parse_manifest(DECAY).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = run_experiment(&m, Kind::Decay, &opts(dir.path())).unwrap();
    assert!(out.pass);
    let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,mean_h_sq,ci_half_width,bound,margin");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        assert_eq!(r.len(), 5);
        assert!(r[4] <= 0.0, "{r:?}");
    }
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[5][0] - 0.5).abs() < 1e-12);
}

#[test]
fn failing_check_sets_verdict_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("noisy.toml");
    std::fs::write(&manifest, NOISY).unwrap();
    let out_dir = dir.path().join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_mra"))
        .args(["check", "--manifest"])
        .arg(&manifest)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1), "{}", String::from_utf8_lossy(&status.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["verdict"], "fail");
    let failed: Vec<&str> = summary["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["verdict"] == "fail")
        .map(|v| v["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["noise_balance"]);
}

#[test]
fn bad_manifest_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("bad.toml");
    std::fs::write(&manifest, NOISY.replace("lipschitz = 0.6", "lipshitz = 0.6")).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_mra"))
        .args(["check", "--manifest"])
        .arg(&manifest)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&status.stderr).contains("sigma.lipshitz"));
}
