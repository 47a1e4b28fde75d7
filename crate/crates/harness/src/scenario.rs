//! Scenario files: one game configuration plus the assertions checked
//! against its density series.

use std::fmt;
use std::path::Path;

use pyreline_core::metrics::DEFAULT_TAIL_FRACTION;
use pyreline_core::schedule::ScheduleDescriptor;
use pyreline_core::strategies::{ARSONIST_NAMES, BUILDER_NAMES};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

pub const SCHEMA_VERSION: u32 = 1;

fn default_tail_fraction() -> f64 {
    DEFAULT_TAIL_FRACTION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    pub name: String,
    pub schedule: ScheduleDescriptor,
    pub builder: String,
    pub arsonist: String,
    pub turns: u64,
    pub seed: u64,
    /// Warmup turns for the phase Arsonist.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warmup: Option<u64>,
    #[serde(default = "default_tail_fraction")]
    pub tail_fraction: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checkpoints: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assertions: Vec<Assertion>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    TailMin,
    TailMax,
    Checkpoint,
    PhaseBoundaryMin,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::TailMin => "tail_min",
            Metric::TailMax => "tail_max",
            Metric::Checkpoint => "checkpoint",
            Metric::PhaseBoundaryMin => "phase_boundary_min",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparator {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
}

impl Comparator {
    /// NaN never satisfies a comparison.
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Comparator::Le => value <= threshold,
            Comparator::Ge => value >= threshold,
            Comparator::Lt => value < threshold,
            Comparator::Gt => value > threshold,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Le => "<=",
            Comparator::Ge => ">=",
            Comparator::Lt => "<",
            Comparator::Gt => ">",
        }
    }
}

/// `horizon` means:
/// - `tail_min`/`tail_max`: the last turn of the tail window (default: the
///   final turn); the window covers the last ⌈tail_fraction·horizon⌉ turns.
/// - `checkpoint`: the turn whose density is compared (required).
/// - `phase_boundary_min`: the earliest phase boundary included (default 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assertion {
    pub metric: Metric,
    pub comparator: Comparator,
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.metric, self.comparator.symbol(), self.threshold)?;
        if let Some(h) = self.horizon {
            write!(f, " @ {h}")?;
        }
        Ok(())
    }
}

impl Scenario {
    /// Parses and validates a scenario; `source_name` labels parse errors.
    pub fn from_json(text: &str, source_name: &str) -> Result<Self, HarnessError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| HarnessError::parse(source_name, &e))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.schema != SCHEMA_VERSION {
            return Err(HarnessError::field(
                "schema",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema),
            ));
        }
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
        {
            return Err(HarnessError::field(
                "name",
                "must be non-empty and use only letters, digits, '-', '_' and '.'",
            ));
        }
        self.schedule
            .validate()
            .map_err(|e| HarnessError::field("schedule", e.to_string()))?;
        if !BUILDER_NAMES.contains(&self.builder.as_str()) {
            return Err(HarnessError::field(
                "builder",
                format!("unknown strategy `{}` (expected one of {BUILDER_NAMES:?})", self.builder),
            ));
        }
        if !ARSONIST_NAMES.contains(&self.arsonist.as_str()) {
            return Err(HarnessError::field(
                "arsonist",
                format!("unknown strategy `{}` (expected one of {ARSONIST_NAMES:?})", self.arsonist),
            ));
        }
        if self.turns == 0 {
            return Err(HarnessError::field("turns", "must be at least 1"));
        }
        match self.warmup {
            Some(0) => return Err(HarnessError::field("warmup", "must be at least 1")),
            Some(_) if self.arsonist != "phase" => {
                return Err(HarnessError::field("warmup", "only the phase arsonist takes a warmup"))
            }
            _ => {}
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(HarnessError::field("tail_fraction", "must lie in (0, 1]"));
        }
        for (i, &c) in self.checkpoints.iter().enumerate() {
            if c == 0 || c > self.turns {
                return Err(HarnessError::field(
                    format!("checkpoints[{i}]"),
                    format!("turn {c} outside 1..={}", self.turns),
                ));
            }
        }
        for (i, a) in self.assertions.iter().enumerate() {
            if !a.threshold.is_finite() {
                return Err(HarnessError::field(format!("assertions[{i}].threshold"), "must be finite"));
            }
            match a.horizon {
                None if a.metric == Metric::Checkpoint => {
                    return Err(HarnessError::field(
                        format!("assertions[{i}].horizon"),
                        "checkpoint assertions need a horizon",
                    ))
                }
                Some(h) if h == 0 || h > self.turns => {
                    return Err(HarnessError::field(
                        format!("assertions[{i}].horizon"),
                        format!("turn {h} outside 1..={}", self.turns),
                    ))
                }
                _ => {}
            }
            if a.metric == Metric::PhaseBoundaryMin && self.arsonist != "phase" {
                return Err(HarnessError::field(
                    format!("assertions[{i}].metric"),
                    "phase_boundary_min needs the phase arsonist",
                ));
            }
        }
        Ok(())
    }
}
