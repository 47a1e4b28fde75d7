//! Density series and finite-horizon stand-ins for the lower and upper
//! burning densities.
//!
//! A finite trace cannot decide a liminf or limsup, so we report the minimum
//! and maximum density over a trailing window of the run instead.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::TurnRecord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("series has no records with a nonempty graph")]
    EmptySeries,
    #[error("turn {0} is outside the recorded range")]
    OutOfRange(u64),
    #[error("turn {0} was not retained in the subsampled series")]
    NotRetained(u64),
    #[error("tail fraction {0} is not in (0, 1]")]
    BadFraction(String),
    #[error("record for turn {0} breaks series monotonicity")]
    NotMonotone(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityRecord {
    pub n: u64,
    pub vertices: u64,
    pub burning: u64,
}

impl DensityRecord {
    /// NaN while the graph is still empty.
    pub fn density(&self) -> f64 {
        if self.vertices == 0 {
            f64::NAN
        } else {
            self.burning as f64 / self.vertices as f64
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensitySeries {
    records: Vec<DensityRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u64,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub turns: u64,
    pub final_density: f64,
    pub tail_min: f64,
    pub tail_max: f64,
    pub checkpoints: Vec<Checkpoint>,
}

pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;

impl DensitySeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_records(records: &[TurnRecord]) -> Self {
        DensitySeries {
            records: records
                .iter()
                .map(|r| DensityRecord {
                    n: r.turn,
                    vertices: r.vertex_total,
                    burning: r.burning_total,
                })
                .collect(),
        }
    }

    /// Appends a record, checking the series invariants.
    pub fn push(&mut self, r: DensityRecord) -> Result<(), MetricsError> {
        let ok = r.burning <= r.vertices
            && self.records.last().is_none_or(|p| {
                p.n < r.n && p.vertices <= r.vertices && p.burning <= r.burning
            });
        if !ok {
            return Err(MetricsError::NotMonotone(r.n));
        }
        self.records.push(r);
        Ok(())
    }

    pub fn records(&self) -> &[DensityRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn densities(&self) -> Vec<f64> {
        self.records.iter().map(DensityRecord::density).collect()
    }

    pub fn last(&self) -> Option<&DensityRecord> {
        self.records.last()
    }

    /// Min and max density over the last ⌈fraction·len⌉ records.
    pub fn tail_extrema(&self, fraction: f64) -> Result<(f64, f64), MetricsError> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(MetricsError::BadFraction(fraction.to_string()));
        }
        let take = ((fraction * self.records.len() as f64).ceil() as usize).min(self.records.len());
        extrema(&self.records[self.records.len() - take..])
    }

    pub fn full_extrema(&self) -> Result<(f64, f64), MetricsError> {
        extrema(&self.records)
    }

    pub fn record_at(&self, n: u64) -> Result<&DensityRecord, MetricsError> {
        let (first, last) = match (self.records.first(), self.records.last()) {
            (Some(f), Some(l)) => (f.n, l.n),
            _ => return Err(MetricsError::OutOfRange(n)),
        };
        if n < first || n > last {
            return Err(MetricsError::OutOfRange(n));
        }
        self.records
            .binary_search_by_key(&n, |r| r.n)
            .map(|i| &self.records[i])
            .map_err(|_| MetricsError::NotRetained(n))
    }

    pub fn checkpoint_densities(&self, checkpoints: &[u64]) -> Result<Vec<f64>, MetricsError> {
        checkpoints
            .iter()
            .map(|&n| self.record_at(n).map(DensityRecord::density))
            .collect()
    }

    pub fn summary(&self, tail_fraction: f64, checkpoints: &[u64]) -> Result<Summary, MetricsError> {
        let last = self.records.last().ok_or(MetricsError::EmptySeries)?;
        let (tail_min, tail_max) = self.tail_extrema(tail_fraction)?;
        let densities = self.checkpoint_densities(checkpoints)?;
        Ok(Summary {
            turns: last.n,
            final_density: last.density(),
            tail_min,
            tail_max,
            checkpoints: checkpoints
                .iter()
                .zip(densities)
                .map(|(&n, density)| Checkpoint { n, density })
                .collect(),
        })
    }
}

fn extrema(records: &[DensityRecord]) -> Result<(f64, f64), MetricsError> {
    let mut it = records.iter().filter(|r| r.vertices > 0).map(DensityRecord::density);
    let first = it.next().ok_or(MetricsError::EmptySeries)?;
    Ok(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
}
