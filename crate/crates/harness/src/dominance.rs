//! Paired replays of random legal constructions against their incremental
//! spanning trees.

use pyreline_core::tree_reduction::{
    dominance_check, incremental_spanning_tree, random_construction, random_sources, TreeError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DominanceConfig {
    pub samples: usize,
    pub seed: u64,
    pub turns: u64,
    /// Upper bound on the vertices added per turn.
    pub max_new: usize,
    /// Probability of each extra (cycle-closing) edge.
    pub extra_edge_prob: f64,
}

impl Default for DominanceConfig {
    fn default() -> Self {
        DominanceConfig {
            samples: 100,
            seed: 0,
            turns: 100,
            max_new: 3,
            extra_edge_prob: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub samples: usize,
    pub turns_checked: u64,
    pub violations: usize,
    /// Samples where the tree burned strictly fewer vertices at some turn.
    pub strict_samples: usize,
    /// Human-readable description of every violation.
    pub failures: Vec<String>,
}

impl DominanceReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

enum Sample {
    Ok { turns: u64, strict: bool },
    Violation(String),
}

fn run_sample(config: &DominanceConfig, index: usize) -> Result<Sample, HarnessError> {
    // Each sample owns a stream so results do not depend on scheduling.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let g = random_construction(&mut rng, config.turns, config.max_new, config.extra_edge_prob);
    let tree = incremental_spanning_tree(&g)?;
    let sources = random_sources(&mut rng, &g);
    match dominance_check(&g, &tree, &sources, config.turns as usize) {
        Ok(pairs) => {
            if let Some(p) = pairs.iter().find(|p| p.tree_vertices != p.graph_vertices) {
                return Ok(Sample::Violation(format!(
                    "sample {index}, turn {}: |V(T)| = {} but |V(G)| = {}",
                    p.turn, p.tree_vertices, p.graph_vertices
                )));
            }
            Ok(Sample::Ok {
                turns: pairs.len() as u64,
                strict: pairs.iter().any(|p| p.tree_burning < p.graph_burning),
            })
        }
        Err(e @ TreeError::DominanceViolated { .. }) => Ok(Sample::Violation(format!("sample {index}: {e}"))),
        Err(e) => Err(e.into()),
    }
}

pub fn verify_tree_dominance(config: &DominanceConfig) -> Result<DominanceReport, HarnessError> {
    let samples: Vec<Sample> = (0..config.samples)
        .into_par_iter()
        .map(|i| run_sample(config, i))
        .collect::<Result<_, _>>()?;
    let mut report = DominanceReport {
        samples: config.samples,
        turns_checked: 0,
        violations: 0,
        strict_samples: 0,
        failures: Vec::new(),
    };
    for s in samples {
        match s {
            Sample::Ok { turns, strict } => {
                report.turns_checked += turns;
                report.strict_samples += usize::from(strict);
            }
            Sample::Violation(msg) => {
                report.violations += 1;
                report.failures.push(msg);
            }
        }
    }
    Ok(report)
}
