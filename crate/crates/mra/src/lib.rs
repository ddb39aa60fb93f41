//! Manifest-driven experiments on top of `mra-core`.
//!
//! ```text
//! mra <command> --manifest <path> [--seed <u64>] [--out <dir>]
//! ```
//!
//! Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 configuration
//! error, 3 runtime or numerical failure.

pub mod error;
pub mod manifest;
pub mod output;
pub mod run;

pub use error::CliError;
pub use manifest::{parse_manifest, Kind, Manifest, ManifestError};
pub use run::{run_experiment, RunOptions, RunOutcome, Verdict};

/// Reads `MRA_THREADS`; unset, empty or unparsable means 0 (automatic).
pub fn threads_from_env() -> usize {
    std::env::var("MRA_THREADS").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0)
}

/// Parses the manifest at `path` and runs it as `kind`.
pub fn run_file(path: &std::path::Path, kind: Kind, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let manifest = parse_manifest(&text)?;
    run_experiment(&manifest, kind, opts)
}
