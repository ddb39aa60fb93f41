use std::path::PathBuf;

use crate::manifest::{Kind, ManifestError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid manifest:\n{0}")]
    Manifest(#[from] ManifestError),

    #[error("manifest describes a {manifest} experiment, not {command}")]
    KindMismatch { command: Kind, manifest: Kind },

    #[error(transparent)]
    Core(#[from] mra_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    /// 2 for configuration problems, 3 for runtime and numerical failures.
    pub fn exit_code(&self) -> i32 {
        use mra_core::Error as E;
        match self {
            Self::Manifest(_) | Self::KindMismatch { .. } => 2,
            Self::Io { .. } => 3,
            Self::Core(e) => match e {
                E::InvalidConfiguration(_)
                | E::Dimension { .. }
                | E::Range { .. }
                | E::Mode { .. }
                | E::Integrability { .. }
                | E::Universe(_) => 2,
                E::BlowUp { .. } | E::Path { .. } | E::NonConvergence { .. } => 3,
            },
        }
    }
}
