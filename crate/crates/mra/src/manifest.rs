//! Experiment manifests: TOML in, validated [`Manifest`] out, and back.
//!
//! Every key is checked; unknown keys are reported by dotted path. All
//! errors found in one pass are returned together.

use std::collections::BTreeSet;
use std::fmt;

use mra_core::ensemble::{FamilySpec, RadiusProfile};
use mra_core::model::{DeclaredConstants, Forcing, Model, ModelParams, NonlocalCoefficient, Noise, Reaction, Regime};
use mra_core::spectral::{Basis, SpectralState};
use toml::{Table, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Check,
    Simulate,
    Ensemble,
    Absorb,
    Decay,
    EntryTime,
    Steady,
    OracleCompare,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::Check,
        Kind::Simulate,
        Kind::Ensemble,
        Kind::Absorb,
        Kind::Decay,
        Kind::EntryTime,
        Kind::Steady,
        Kind::OracleCompare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Check => "check",
            Kind::Simulate => "simulate",
            Kind::Ensemble => "ensemble",
            Kind::Absorb => "absorb",
            Kind::Decay => "decay",
            Kind::EntryTime => "entry-time",
            Kind::Steady => "steady",
            Kind::OracleCompare => "oracle-compare",
        }
    }

    pub fn from_name(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisSpec {
    pub length: f64,
    pub modes: usize,
    pub grid: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateSpec {
    Rate(f64),
    Epsilon(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReactionPreset {
    Linear { slope: f64 },
    Cubic { eta: f64, kappa: f64 },
    Tanh { gain: f64 },
}

impl ReactionPreset {
    pub fn to_reaction(self) -> Reaction<f64> {
        match self {
            Self::Linear { slope } => Reaction::Linear { slope },
            Self::Cubic { eta, kappa } => Reaction::Cubic { eta, kappa },
            Self::Tanh { gain } => Reaction::Tanh { gain },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSpec {
    pub tau: f64,
    pub end: f64,
    pub dt: f64,
    pub record_every: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyManifest {
    /// Mode coefficients, zero-padded to the basis size.
    Point { modes: Vec<f64> },
    Gaussian { std: Vec<f64> },
    Ball(RadiusProfile<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub kind: Option<Kind>,
    pub basis: BasisSpec,
    pub regime: Regime,
    pub rate: RateSpec,
    pub nonlocal: NonlocalCoefficient<f64>,
    pub reaction: ReactionPreset,
    pub declared: DeclaredConstants<f64>,
    pub sigma: Noise<f64>,
    pub forcing: Forcing<f64>,
    pub time: TimeSpec,
    pub paths: usize,
    pub seed: u64,
    pub family: FamilyManifest,
    pub entry_t: f64,
    pub entry_cap: f64,
    pub output_dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub key: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

/// All problems found in a manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestError(pub Vec<FieldError>);

impl ManifestError {
    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|e| e.key.as_str())
    }
}

impl fmt::Display for ManifestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ManifestError {}

struct Errors(Vec<FieldError>);

impl Errors {
    fn push(&mut self, key: impl Into<String>, message: impl Into<String>) {
        self.0.push(FieldError {
            key: key.into(),
            message: message.into(),
        });
    }
}

/// One `[section]`, tracking which keys were read.
struct Section<'t> {
    name: String,
    table: Option<&'t Table>,
    used: BTreeSet<&'static str>,
}

impl<'t> Section<'t> {
    fn new(root: &'t Table, name: &str, errs: &mut Errors) -> Self {
        let table = match root.get(name) {
            None => None,
            Some(Value::Table(t)) => Some(t),
            Some(_) => {
                errs.push(name, "expected a table");
                None
            }
        };
        Self {
            name: name.to_string(),
            table,
            used: BTreeSet::new(),
        }
    }

    fn path(&self, key: &str) -> String {
        format!("{}.{key}", self.name)
    }

    fn raw(&mut self, key: &'static str) -> Option<&'t Value> {
        self.used.insert(key);
        self.table.and_then(|t| t.get(key))
    }

    fn has(&self, key: &str) -> bool {
        self.table.is_some_and(|t| t.contains_key(key))
    }

    fn f64(&mut self, key: &'static str, errs: &mut Errors) -> Option<f64> {
        match self.raw(key)? {
            Value::Float(x) if x.is_finite() => Some(*x),
            Value::Float(_) => {
                errs.push(self.path(key), "must be finite");
                None
            }
            Value::Integer(i) => Some(*i as f64),
            _ => {
                errs.push(self.path(key), "expected a number");
                None
            }
        }
    }

    fn req_f64(&mut self, key: &'static str, errs: &mut Errors) -> Option<f64> {
        if !self.has(key) {
            errs.push(self.path(key), "missing required key");
            self.used.insert(key);
            return None;
        }
        self.f64(key, errs)
    }

    fn int(&mut self, key: &'static str, errs: &mut Errors) -> Option<i64> {
        match self.raw(key)? {
            Value::Integer(i) => Some(*i),
            _ => {
                errs.push(self.path(key), "expected an integer");
                None
            }
        }
    }

    fn count(&mut self, key: &'static str, min: usize, errs: &mut Errors) -> Option<usize> {
        let i = self.int(key, errs)?;
        if i < min as i64 {
            errs.push(self.path(key), format!("must be at least {min}, got {i}"));
            return None;
        }
        Some(i as usize)
    }

    fn str(&mut self, key: &'static str, errs: &mut Errors) -> Option<&'t str> {
        match self.raw(key)? {
            Value::String(s) => Some(s.as_str()),
            _ => {
                errs.push(self.path(key), "expected a string");
                None
            }
        }
    }

    fn vec(&mut self, key: &'static str, errs: &mut Errors) -> Option<Vec<f64>> {
        let path = self.path(key);
        to_vec(self.raw(key)?, &path, errs)
    }

    fn matrix(&mut self, key: &'static str, errs: &mut Errors) -> Option<Vec<Vec<f64>>> {
        let path = self.path(key);
        match self.raw(key)? {
            Value::Array(rows) => rows
                .iter()
                .enumerate()
                .map(|(i, r)| to_vec(r, &format!("{path}[{i}]"), errs))
                .collect(),
            _ => {
                errs.push(path, "expected an array of arrays");
                None
            }
        }
    }

    fn finish(self, errs: &mut Errors) {
        if let Some(t) = self.table {
            for k in t.keys() {
                if !self.used.contains(k.as_str()) {
                    errs.push(format!("{}.{k}", self.name), "unknown key");
                }
            }
        }
    }
}

fn to_vec(v: &Value, path: &str, errs: &mut Errors) -> Option<Vec<f64>> {
    let Value::Array(items) = v else {
        errs.push(path, "expected an array of numbers");
        return None;
    };
    let mut out = Vec::with_capacity(items.len());
    for (i, x) in items.iter().enumerate() {
        match x {
            Value::Float(f) if f.is_finite() => out.push(*f),
            Value::Integer(n) => out.push(*n as f64),
            _ => {
                errs.push(format!("{path}[{i}]"), "expected a finite number");
                return None;
            }
        }
    }
    Some(out)
}

fn positive(sec: &Section<'_>, key: &str, x: f64, errs: &mut Errors) -> bool {
    if x > 0.0 {
        true
    } else {
        errs.push(sec.path(key), format!("must be > 0, got {x}"));
        false
    }
}

const SECTIONS: [&str; 11] = [
    "basis", "model", "nonlocal", "reaction", "sigma", "forcing", "time", "ensemble", "family", "entry", "output",
];

/// Parses and validates a manifest.
pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    let root: Table = text.parse().map_err(|e: toml::de::Error| {
        ManifestError(vec![FieldError {
            key: "<document>".into(),
            message: e.message().to_string(),
        }])
    })?;
    let mut errs = Errors(Vec::new());

    for k in root.keys() {
        if k != "kind" && !SECTIONS.contains(&k.as_str()) {
            errs.push(k.clone(), "unknown key");
        }
    }
    let kind = match root.get("kind") {
        None => None,
        Some(Value::String(s)) => match Kind::from_name(s) {
            Some(k) => Some(k),
            None => {
                errs.push("kind", format!("unknown experiment kind {s:?}"));
                None
            }
        },
        Some(_) => {
            errs.push("kind", "expected a string");
            None
        }
    };

    let mut s = Section::new(&root, "basis", &mut errs);
    let length = s.f64("length", &mut errs).unwrap_or(std::f64::consts::PI);
    positive(&s, "length", length, &mut errs);
    let modes = s.count("modes", 1, &mut errs).unwrap_or(16);
    let grid = s.count("grid", 1, &mut errs).unwrap_or(4 * modes);
    if grid < 2 * modes {
        errs.push("basis.grid", format!("must be at least 2 * modes = {}, got {grid}", 2 * modes));
    }
    s.finish(&mut errs);
    let basis = BasisSpec { length, modes, grid };

    let mut s = Section::new(&root, "model", &mut errs);
    let regime = match s.str("regime", &mut errs) {
        Some("deterministic") => Some(Regime::DeterministicRandom),
        Some("stochastic") => Some(Regime::Stochastic),
        Some(other) => {
            errs.push("model.regime", format!("expected \"deterministic\" or \"stochastic\", got {other:?}"));
            None
        }
        None => {
            if !s.has("regime") {
                errs.push("model.regime", "missing required key");
            }
            None
        }
    };
    let rate = s.f64("rate", &mut errs);
    let eps = s.f64("epsilon", &mut errs);
    let rate = match (rate, eps) {
        (Some(_), Some(_)) => {
            errs.push("model.epsilon", "give either model.rate or model.epsilon, not both");
            RateSpec::Epsilon(0.5)
        }
        (Some(r), None) => {
            positive(&s, "rate", r, &mut errs);
            RateSpec::Rate(r)
        }
        (None, Some(e)) => {
            if !(e > 0.0 && e < 1.0) {
                errs.push("model.epsilon", format!("must lie in (0, 1), got {e}"));
            }
            RateSpec::Epsilon(e)
        }
        (None, None) => RateSpec::Epsilon(0.5),
    };
    s.finish(&mut errs);

    let mut s = Section::new(&root, "nonlocal", &mut errs);
    let nonlocal = match s.str("preset", &mut errs) {
        Some("constant") => s.req_f64("value", &mut errs).map(NonlocalCoefficient::Constant),
        Some(p @ ("saturating" | "decreasing")) => {
            let m = s.req_f64("m", &mut errs);
            let big_m = s.req_f64("M", &mut errs);
            match (m, big_m) {
                (Some(m), Some(big_m)) if p == "saturating" => Some(NonlocalCoefficient::Saturating { m, big_m }),
                (Some(m), Some(big_m)) => Some(NonlocalCoefficient::Decreasing { m, big_m }),
                _ => None,
            }
        }
        Some(other) => {
            errs.push("nonlocal.preset", format!("unknown preset {other:?}"));
            None
        }
        None => {
            if !s.has("preset") {
                errs.push("nonlocal.preset", "missing required key");
            }
            None
        }
    };
    if let Some(a) = nonlocal {
        if !(a.lower() > 0.0 && a.lower() <= a.upper()) {
            errs.push("nonlocal", format!("bounds must satisfy 0 < m <= M, got m = {}, M = {}", a.lower(), a.upper()));
        }
    }
    s.finish(&mut errs);

    let mut s = Section::new(&root, "reaction", &mut errs);
    let reaction = match s.str("preset", &mut errs) {
        Some("linear") => s.req_f64("slope", &mut errs).map(|slope| ReactionPreset::Linear { slope }),
        Some("cubic") => {
            let eta = s.req_f64("eta", &mut errs);
            let kappa = s.req_f64("kappa", &mut errs);
            if let Some(k) = kappa {
                positive(&s, "kappa", k, &mut errs);
            }
            eta.zip(kappa).map(|(eta, kappa)| ReactionPreset::Cubic { eta, kappa })
        }
        Some("tanh") => s.req_f64("gain", &mut errs).map(|gain| ReactionPreset::Tanh { gain }),
        Some(other) => {
            errs.push("reaction.preset", format!("unknown preset {other:?}"));
            None
        }
        None => {
            if !s.has("preset") {
                errs.push("reaction.preset", "missing required key");
            }
            None
        }
    };
    let declared = DeclaredConstants {
        alpha: s.f64("alpha", &mut errs),
        beta: s.f64("beta", &mut errs),
        gamma: s.f64("gamma", &mut errs),
        delta: s.f64("delta", &mut errs),
        eta: s.f64("deriv_bound", &mut errs),
        p: s.f64("p", &mut errs),
        gamma1: s.f64("gamma1", &mut errs),
        gamma2: s.f64("gamma2", &mut errs),
        gamma3: s.f64("gamma3", &mut errs),
        gamma4: s.f64("gamma4", &mut errs),
    };
    if let Some(p) = declared.p {
        if p < 2.0 {
            errs.push("reaction.p", format!("must be >= 2, got {p}"));
        }
    }
    s.finish(&mut errs);

    let mut s = Section::new(&root, "sigma", &mut errs);
    let sigma = match s.str("preset", &mut errs) {
        None | Some("zero") => Noise::Zero,
        Some("affine") => Noise::Affine {
            lipschitz: s.f64("lipschitz", &mut errs).unwrap_or(0.0),
            at_zero: s.f64("at_zero", &mut errs).unwrap_or(0.0),
        },
        Some("sine") => Noise::Sine {
            amplitude: s.req_f64("amplitude", &mut errs).unwrap_or(0.0),
        },
        Some(other) => {
            errs.push("sigma.preset", format!("unknown preset {other:?}"));
            Noise::Zero
        }
    };
    if regime == Some(Regime::DeterministicRandom) && !sigma.is_zero() {
        errs.push("sigma.preset", "deterministic regime requires zero noise");
    }
    s.finish(&mut errs);

    let mut s = Section::new(&root, "forcing", &mut errs);
    let forcing = match s.str("kind", &mut errs) {
        None | Some("zero") => Forcing::Zero,
        Some("constant") => Forcing::Constant {
            modes: s.vec("modes", &mut errs).unwrap_or_default(),
        },
        Some("exponential") => Forcing::Exponential {
            nu: s.req_f64("nu", &mut errs).unwrap_or(0.0),
            modes: s.vec("modes", &mut errs).unwrap_or_default(),
        },
        Some("polynomial") => Forcing::Polynomial {
            coeffs: s.vec("coeffs", &mut errs).unwrap_or_default(),
            modes: s.vec("modes", &mut errs).unwrap_or_default(),
        },
        Some("tabulated") => Forcing::Tabulated {
            times: s.vec("times", &mut errs).unwrap_or_default(),
            values: s.matrix("values", &mut errs).unwrap_or_default(),
        },
        Some(other) => {
            errs.push("forcing.kind", format!("unknown forcing kind {other:?}"));
            Forcing::Zero
        }
    };
    if let Err(e) = forcing.check_shape() {
        errs.push("forcing", e.to_string());
    }
    if forcing.mode_len() > modes {
        errs.push("forcing", format!("has {} modes but the basis has {modes}", forcing.mode_len()));
    }
    s.finish(&mut errs);

    let mut s = Section::new(&root, "time", &mut errs);
    let tau = s.f64("tau", &mut errs).unwrap_or(0.0);
    let end = s.f64("end", &mut errs).unwrap_or(tau + 1.0);
    let dt = s.f64("dt", &mut errs).unwrap_or(1e-3);
    positive(&s, "dt", dt, &mut errs);
    if !(end > tau) {
        errs.push("time.end", format!("must exceed time.tau = {tau}, got {end}"));
    }
    let record_every = s.count("record_every", 1, &mut errs).unwrap_or(1);
    s.finish(&mut errs);
    let time = TimeSpec { tau, end, dt, record_every };

    let mut s = Section::new(&root, "ensemble", &mut errs);
    let paths = s.count("paths", 2, &mut errs).unwrap_or(1000);
    let seed = match s.int("seed", &mut errs) {
        Some(i) if i < 0 => {
            errs.push("ensemble.seed", format!("must be nonnegative, got {i}"));
            0
        }
        Some(i) => i as u64,
        None => 0,
    };
    s.finish(&mut errs);

    let mut s = Section::new(&root, "family", &mut errs);
    let family = match s.str("shape", &mut errs) {
        None | Some("point") => FamilyManifest::Point {
            modes: s.vec("modes", &mut errs).unwrap_or_else(|| vec![1.0]),
        },
        Some("gaussian") => {
            let std = s.vec("std", &mut errs).unwrap_or_default();
            if std.iter().any(|&x| x < 0.0) {
                errs.push("family.std", "must be nonnegative");
            }
            FamilyManifest::Gaussian { std }
        }
        Some("ball") => {
            let profile = match s.str("profile", &mut errs) {
                None | Some("constant") => Some(RadiusProfile::Constant {
                    radius: s.req_f64("radius", &mut errs).unwrap_or(1.0),
                }),
                Some("affine_abs") => Some(RadiusProfile::AffineAbs {
                    base: s.req_f64("base", &mut errs).unwrap_or(0.0),
                    slope: s.req_f64("slope", &mut errs).unwrap_or(0.0),
                }),
                Some("exponential") => Some(RadiusProfile::Exponential {
                    r0: s.req_f64("r0", &mut errs).unwrap_or(0.0),
                    growth: s.req_f64("growth", &mut errs).unwrap_or(0.0),
                }),
                Some(other) => {
                    errs.push("family.profile", format!("unknown radius profile {other:?}"));
                    None
                }
            };
            match profile {
                Some(p) => {
                    let fam: FamilySpec<f64> = FamilySpec::Ball(p);
                    if let Err(e) = fam.check(modes) {
                        errs.push("family", e.to_string());
                    }
                    FamilyManifest::Ball(p)
                }
                None => FamilyManifest::Point { modes: vec![1.0] },
            }
        }
        Some(other) => {
            errs.push("family.shape", format!("unknown shape {other:?}"));
            FamilyManifest::Point { modes: vec![1.0] }
        }
    };
    match &family {
        FamilyManifest::Point { modes: m } | FamilyManifest::Gaussian { std: m } if m.len() > modes => {
            errs.push("family", format!("has {} modes but the basis has {modes}", m.len()));
        }
        _ => {}
    }
    s.finish(&mut errs);

    let mut s = Section::new(&root, "entry", &mut errs);
    let entry_t = s.f64("t", &mut errs).unwrap_or(0.0);
    let entry_cap = s.f64("cap", &mut errs).unwrap_or(8.0);
    if entry_cap < 1.0 {
        errs.push("entry.cap", format!("must be at least 1, got {entry_cap}"));
    }
    s.finish(&mut errs);

    let mut s = Section::new(&root, "output", &mut errs);
    let output_dir = s.str("dir", &mut errs).map(str::to_string);
    s.finish(&mut errs);

    if !errs.0.is_empty() {
        return Err(ManifestError(errs.0));
    }
    Ok(Manifest {
        kind,
        basis,
        regime: regime.expect("checked above"),
        rate,
        nonlocal: nonlocal.expect("checked above"),
        reaction: reaction.expect("checked above"),
        declared,
        sigma,
        forcing,
        time,
        paths,
        seed,
        family,
        entry_t,
        entry_cap,
        output_dir,
    })
}

fn floats(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| Value::Float(x)).collect())
}

fn table(pairs: Vec<(&str, Value)>) -> Value {
    Value::Table(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

impl Manifest {
    /// TOML text that parses back to `self`.
    pub fn to_toml(&self) -> String {
        let mut root = Table::new();
        if let Some(k) = self.kind {
            root.insert("kind".into(), Value::String(k.name().into()));
        }
        root.insert(
            "basis".into(),
            table(vec![
                ("length", Value::Float(self.basis.length)),
                ("modes", Value::Integer(self.basis.modes as i64)),
                ("grid", Value::Integer(self.basis.grid as i64)),
            ]),
        );
        let mut model = vec![("regime", Value::String(regime_name(self.regime).into()))];
        match self.rate {
            RateSpec::Rate(r) => model.push(("rate", Value::Float(r))),
            RateSpec::Epsilon(e) => model.push(("epsilon", Value::Float(e))),
        }
        root.insert("model".into(), table(model));
        root.insert(
            "nonlocal".into(),
            match self.nonlocal {
                NonlocalCoefficient::Constant(c) => {
                    table(vec![("preset", Value::String("constant".into())), ("value", Value::Float(c))])
                }
                NonlocalCoefficient::Saturating { m, big_m } => table(vec![
                    ("preset", Value::String("saturating".into())),
                    ("m", Value::Float(m)),
                    ("M", Value::Float(big_m)),
                ]),
                NonlocalCoefficient::Decreasing { m, big_m } => table(vec![
                    ("preset", Value::String("decreasing".into())),
                    ("m", Value::Float(m)),
                    ("M", Value::Float(big_m)),
                ]),
            },
        );
        let mut reaction = match self.reaction {
            ReactionPreset::Linear { slope } => {
                vec![("preset", Value::String("linear".into())), ("slope", Value::Float(slope))]
            }
            ReactionPreset::Cubic { eta, kappa } => vec![
                ("preset", Value::String("cubic".into())),
                ("eta", Value::Float(eta)),
                ("kappa", Value::Float(kappa)),
            ],
            ReactionPreset::Tanh { gain } => {
                vec![("preset", Value::String("tanh".into())), ("gain", Value::Float(gain))]
            }
        };
        let d = &self.declared;
        for (k, v) in [
            ("alpha", d.alpha),
            ("beta", d.beta),
            ("gamma", d.gamma),
            ("delta", d.delta),
            ("deriv_bound", d.eta),
            ("p", d.p),
            ("gamma1", d.gamma1),
            ("gamma2", d.gamma2),
            ("gamma3", d.gamma3),
            ("gamma4", d.gamma4),
        ] {
            if let Some(v) = v {
                reaction.push((k, Value::Float(v)));
            }
        }
        root.insert("reaction".into(), table(reaction));
        root.insert(
            "sigma".into(),
            match self.sigma {
                Noise::Zero => table(vec![("preset", Value::String("zero".into()))]),
                Noise::Affine { lipschitz, at_zero } => table(vec![
                    ("preset", Value::String("affine".into())),
                    ("lipschitz", Value::Float(lipschitz)),
                    ("at_zero", Value::Float(at_zero)),
                ]),
                Noise::Sine { amplitude } => table(vec![
                    ("preset", Value::String("sine".into())),
                    ("amplitude", Value::Float(amplitude)),
                ]),
            },
        );
        root.insert(
            "forcing".into(),
            match &self.forcing {
                Forcing::Zero => table(vec![("kind", Value::String("zero".into()))]),
                Forcing::Constant { modes } => {
                    table(vec![("kind", Value::String("constant".into())), ("modes", floats(modes))])
                }
                Forcing::Exponential { nu, modes } => table(vec![
                    ("kind", Value::String("exponential".into())),
                    ("nu", Value::Float(*nu)),
                    ("modes", floats(modes)),
                ]),
                Forcing::Polynomial { coeffs, modes } => table(vec![
                    ("kind", Value::String("polynomial".into())),
                    ("coeffs", floats(coeffs)),
                    ("modes", floats(modes)),
                ]),
                Forcing::Tabulated { times, values } => table(vec![
                    ("kind", Value::String("tabulated".into())),
                    ("times", floats(times)),
                    ("values", Value::Array(values.iter().map(|v| floats(v)).collect())),
                ]),
            },
        );
        root.insert(
            "time".into(),
            table(vec![
                ("tau", Value::Float(self.time.tau)),
                ("end", Value::Float(self.time.end)),
                ("dt", Value::Float(self.time.dt)),
                ("record_every", Value::Integer(self.time.record_every as i64)),
            ]),
        );
        root.insert(
            "ensemble".into(),
            table(vec![
                ("paths", Value::Integer(self.paths as i64)),
                ("seed", Value::Integer(self.seed as i64)),
            ]),
        );
        root.insert(
            "family".into(),
            match &self.family {
                FamilyManifest::Point { modes } => {
                    table(vec![("shape", Value::String("point".into())), ("modes", floats(modes))])
                }
                FamilyManifest::Gaussian { std } => {
                    table(vec![("shape", Value::String("gaussian".into())), ("std", floats(std))])
                }
                FamilyManifest::Ball(p) => {
                    let mut t = vec![("shape", Value::String("ball".into()))];
                    match *p {
                        RadiusProfile::Constant { radius } => {
                            t.push(("profile", Value::String("constant".into())));
                            t.push(("radius", Value::Float(radius)));
                        }
                        RadiusProfile::AffineAbs { base, slope } => {
                            t.push(("profile", Value::String("affine_abs".into())));
                            t.push(("base", Value::Float(base)));
                            t.push(("slope", Value::Float(slope)));
                        }
                        RadiusProfile::Exponential { r0, growth } => {
                            t.push(("profile", Value::String("exponential".into())));
                            t.push(("r0", Value::Float(r0)));
                            t.push(("growth", Value::Float(growth)));
                        }
                    }
                    table(t)
                }
            },
        );
        root.insert(
            "entry".into(),
            table(vec![("t", Value::Float(self.entry_t)), ("cap", Value::Float(self.entry_cap))]),
        );
        if let Some(dir) = &self.output_dir {
            root.insert("output".into(), table(vec![("dir", Value::String(dir.clone()))]));
        }
        toml::to_string(&root).expect("manifest tables always serialize")
    }

    pub fn basis(&self) -> mra_core::Result<Basis<f64>> {
        Basis::new(self.basis.length, self.basis.modes, self.basis.grid)
    }

    fn params(&self, rate: f64) -> ModelParams<f64> {
        ModelParams {
            regime: self.regime,
            nonlocal: self.nonlocal,
            reaction: self.reaction.to_reaction(),
            declared: self.declared,
            noise: self.sigma,
            forcing: self.forcing.clone(),
            rate,
        }
    }

    /// Model with the rate resolved; an `epsilon` is turned into a rate via
    /// the derived constants.
    pub fn model(&self) -> mra_core::Result<Model<f64>> {
        let basis = self.basis()?;
        match self.rate {
            RateSpec::Rate(r) => Model::new(basis, self.params(r)),
            RateSpec::Epsilon(e) => {
                let probe = Model::new(basis.clone(), self.params(1.0))?;
                let c = mra_core::lab::derive_constants(&probe, mra_core::lab::RateChoice::Epsilon(e))?;
                Model::new(basis, self.params(c.rate))
            }
        }
    }

    /// Model for assumption checking: when no rate can be derived the rate is
    /// left at zero so that the admissibility check reports it.
    pub fn model_for_check(&self) -> mra_core::Result<Model<f64>> {
        match self.model() {
            Ok(m) => Ok(m),
            Err(mra_core::Error::InvalidConfiguration(_)) | Err(mra_core::Error::Range { .. }) => {
                Model::new(self.basis()?, self.params(0.0))
            }
            Err(e) => Err(e),
        }
    }

    pub fn family_spec(&self) -> FamilySpec<f64> {
        match &self.family {
            FamilyManifest::Point { modes } => {
                let mut v = modes.clone();
                v.resize(self.basis.modes, 0.0);
                FamilySpec::Point(SpectralState::new(v))
            }
            FamilyManifest::Gaussian { std } => FamilySpec::Gaussian { std: std.clone() },
            FamilyManifest::Ball(p) => FamilySpec::Ball(*p),
        }
    }
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::DeterministicRandom => "deterministic",
        Regime::Stochastic => "stochastic",
    }
}
