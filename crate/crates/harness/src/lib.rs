//! Scenario files, presets, batch sweeps and report output for pyreline games.

pub mod dominance;
pub mod presets;
pub mod run;
pub mod scenario;
pub mod sweep;

use std::path::PathBuf;

use pyreline_core::engine::EngineError;
use pyreline_core::metrics::MetricsError;
use pyreline_core::tree_reduction::TreeError;
use thiserror::Error;

pub use dominance::{verify_tree_dominance, DominanceReport};
pub use presets::{preset, Preset, PRESET_NAMES};
pub use run::{run_scenario, write_outputs, Report, RunOutcome};
pub use scenario::{Assertion, Comparator, Metric, Scenario};
pub use sweep::{sweep, Grid, SweepRow};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{source_name}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("parameter grid is empty")]
    EmptyGrid,
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl HarnessError {
    pub(crate) fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        HarnessError::Field {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn parse(source_name: &str, err: &serde_json::Error) -> Self {
        HarnessError::Parse {
            source_name: source_name.to_string(),
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

/// Worker count for sweeps: `PYRELINE_THREADS` if set to a positive integer,
/// otherwise rayon's default.
pub fn worker_threads() -> Option<usize> {
    std::env::var("PYRELINE_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}
