//! Configuration, runs and artifacts of the `sojourn-lab` tool.

mod config;
mod output;
mod run;
mod verify;

pub use config::{parse_config, ExperimentConfig, LoadedConfig, SolverConfig, Tolerances};
pub use output::{fmt_f64, sha256_hex, write_atomic, ArtifactSink, Csv, Manifest, ManifestEntry};
pub use run::{build_sweep, predicted_params, run_command, Command, RunOutcome};
pub use verify::{
    verify, verify_with_tables, ClassicalChecks, Criterion, FourierCheck, GChecks, GammaCheck,
    SolverChecks, VerificationReport, WeightedRow,
};

use thiserror::Error;

use crate::classical::ClassicalError;
use crate::partial_waves::PartialWaveError;
use crate::spectral::SpectralError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("verification failed")]
    Verification,
}

impl ExperimentError {
    /// Process exit code: 1 failed verification, 2 usage or config, 3 numerics.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Verification => 1,
            ExperimentError::Config(_) | ExperimentError::Io(_) => 2,
            ExperimentError::Numerical(_) => 3,
        }
    }
}

impl From<ClassicalError> for ExperimentError {
    fn from(e: ClassicalError) -> Self {
        ExperimentError::Numerical(e.to_string())
    }
}

impl From<PartialWaveError> for ExperimentError {
    fn from(e: PartialWaveError) -> Self {
        match e {
            PartialWaveError::NotCentral => {
                ExperimentError::Config("potential: phase shifts need a central potential".into())
            }
            e => ExperimentError::Numerical(e.to_string()),
        }
    }
}

impl From<SpectralError> for ExperimentError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::OutOfScope(_)
            | SpectralError::BadSector(..)
            | SpectralError::Sweep(_) => ExperimentError::Config(e.to_string()),
            e => ExperimentError::Numerical(e.to_string()),
        }
    }
}
