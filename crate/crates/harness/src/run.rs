//! Playing a scenario and writing its trace, summary and report.

use std::fs;
use std::path::{Path, PathBuf};

use pyreline_core::engine::{trace_csv, Game, TracePolicy, TurnRecord};
use pyreline_core::metrics::{Checkpoint, Summary};
use pyreline_core::schedule::{Cycle, GrowthSchedule, ScheduleDescriptor};
use pyreline_core::strategies::{arsonist_with_config, builder_by_name, PhaseConfig, PhaseRecord};
use serde::{Deserialize, Serialize};

use crate::scenario::{Assertion, Metric, Scenario};
use crate::HarnessError;

/// Runs longer than this keep a geometrically thinned trace.
pub const FULL_TRACE_LIMIT: u64 = 100_000;

/// Exact counts at one turn, kept regardless of trace thinning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub n: u64,
    pub vertices: u64,
    pub burning: u64,
    /// `None` when the graph is empty.
    pub density: Option<f64>,
}

impl From<&TurnRecord> for Snapshot {
    fn from(r: &TurnRecord) -> Self {
        Snapshot {
            n: r.turn,
            vertices: r.vertex_total,
            burning: r.burning_total,
            density: (r.vertex_total > 0).then(|| r.density()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Upper,
    Lower,
}

/// The closed-form density bound the fluctuating schedules come with,
/// evaluated for one cycle. The lower bound for `example3` presumes the
/// Arsonist has burned everything present at the threshold turn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleBound {
    pub kind: BoundKind,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub index: usize,
    #[serde(flatten)]
    pub cycle: Cycle,
    /// Counts at the cycle's last turn.
    pub at_end: Snapshot,
    pub bound: Option<CycleBound>,
}

pub fn cycle_bound(desc: &ScheduleDescriptor, cycle: &Cycle) -> Option<CycleBound> {
    let n1 = cycle.threshold_turn as f64;
    match *desc {
        ScheduleDescriptor::Example1 { alpha } => {
            let denom = n1.powf(1.5 * alpha) - n1.powf(alpha);
            (denom > 0.0).then(|| CycleBound {
                kind: BoundKind::Upper,
                value: 3.0 * n1.powf(alpha) / denom,
            })
        }
        ScheduleDescriptor::Example2 { alpha, eps } => {
            let inv = 1.0 / (2.0 * alpha);
            let num = (0.75 + inv + eps) * n1.powf(2.0 * alpha) + 5.0 * n1.powf(3.0 * alpha - 1.0);
            let denom = (1.0 + inv - eps) * n1.powf(2.0 * alpha) - n1.powf(alpha);
            (denom > 0.0).then(|| CycleBound {
                kind: BoundKind::Upper,
                value: num / denom,
            })
        }
        ScheduleDescriptor::Example3 { alpha, beta, .. } => {
            let v = cycle.vertices_at_threshold as f64;
            (v > 0.0).then(|| CycleBound {
                kind: BoundKind::Lower,
                value: v / (v + 4.0 * (beta.powf(-0.5) + 1.0).powf(alpha) * v.powf((alpha + 1.0) / 2.0)),
            })
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssertionResult {
    #[serde(flatten)]
    pub assertion: Assertion,
    /// NaN (serialized as null) when the metric had no data.
    pub value: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub seed: u64,
    pub trace_policy: TracePolicy,
    pub summary: Summary,
    pub phases: Vec<PhaseRecord>,
    /// Counts at every phase boundary N_k reached.
    pub boundaries: Vec<Snapshot>,
    pub cycles: Vec<CycleRecord>,
    pub assertions: Vec<AssertionResult>,
    pub passed: bool,
}

impl Report {
    pub fn boundary_at(&self, n: u64) -> Option<&Snapshot> {
        self.boundaries.iter().find(|b| b.n == n)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: Report,
    pub trace: Vec<TurnRecord>,
}

fn push_boundary(b: Snapshot, boundaries: &mut Vec<Snapshot>) {
    if boundaries.last().is_none_or(|last| last.n < b.n) {
        boundaries.push(b);
    }
}

/// Running min/max of the density over turns `from..=to`.
#[derive(Debug, Clone, Copy)]
struct Window {
    from: u64,
    to: u64,
    lo: f64,
    hi: f64,
    seen: bool,
}

impl Window {
    fn tail(horizon: u64, fraction: f64) -> Self {
        let len = ((fraction * horizon as f64).ceil() as u64).clamp(1, horizon);
        Window {
            from: horizon - len + 1,
            to: horizon,
            lo: f64::NAN,
            hi: f64::NAN,
            seen: false,
        }
    }

    fn observe(&mut self, r: &TurnRecord) {
        if r.turn < self.from || r.turn > self.to || r.vertex_total == 0 {
            return;
        }
        let d = r.density();
        if self.seen {
            self.lo = self.lo.min(d);
            self.hi = self.hi.max(d);
        } else {
            (self.lo, self.hi, self.seen) = (d, d, true);
        }
    }
}

pub fn build_game(scenario: &Scenario) -> Result<Game, HarnessError> {
    let schedule =
        GrowthSchedule::new(scenario.schedule.clone()).map_err(|e| HarnessError::field("schedule", e.to_string()))?;
    let builder =
        builder_by_name(&scenario.builder, scenario.seed).map_err(|e| HarnessError::field("builder", e.to_string()))?;
    let mut phase = PhaseConfig::default();
    if let Some(w) = scenario.warmup {
        phase.warmup = w;
    }
    let arsonist = arsonist_with_config(&scenario.arsonist, scenario.seed, phase)
        .map_err(|e| HarnessError::field("arsonist", e.to_string()))?;
    Ok(Game::new(schedule, Some(builder), Some(arsonist), scenario.seed)
        .with_trace_policy(trace_policy(scenario.turns)))
}

pub fn trace_policy(turns: u64) -> TracePolicy {
    if turns > FULL_TRACE_LIMIT {
        TracePolicy::Geometric
    } else {
        TracePolicy::Full
    }
}

pub fn run_scenario(scenario: &Scenario) -> Result<RunOutcome, HarnessError> {
    scenario.validate()?;
    let mut game = build_game(scenario)?;
    let policy = trace_policy(scenario.turns);

    let mut summary_tail = Window::tail(scenario.turns, scenario.tail_fraction);
    let mut windows: Vec<Option<Window>> = scenario
        .assertions
        .iter()
        .map(|a| match a.metric {
            Metric::TailMin | Metric::TailMax => {
                Some(Window::tail(a.horizon.unwrap_or(scenario.turns), scenario.tail_fraction))
            }
            _ => None,
        })
        .collect();
    let mut wanted: Vec<u64> = scenario.checkpoints.clone();
    wanted.extend(
        scenario
            .assertions
            .iter()
            .filter(|a| a.metric == Metric::Checkpoint)
            .filter_map(|a| a.horizon),
    );
    wanted.sort_unstable();
    wanted.dedup();
    let mut exact: Vec<Snapshot> = Vec::with_capacity(wanted.len());

    let mut boundaries: Vec<Snapshot> = Vec::new();
    let mut cycles: Vec<CycleRecord> = Vec::new();
    let mut seen_phases = 0;
    let mut prev: Option<TurnRecord> = None;

    for turn in 1..=scenario.turns {
        let rec = game.play_turn()?;
        debug_assert_eq!(rec.turn, turn);

        if let Some(arsonist) = game.arsonist() {
            let phases = arsonist.phases();
            if phases.len() > seen_phases {
                for p in &phases[seen_phases..] {
                    if let Some(prev) = prev.filter(|r| r.turn == p.start) {
                        push_boundary(Snapshot::from(&prev), &mut boundaries);
                    }
                }
                seen_phases = phases.len();
            }
            if phases.last().is_some_and(|p| p.end == turn) {
                push_boundary(Snapshot::from(&rec), &mut boundaries);
            }
        }

        let schedule_cycles = game.schedule().cycles();
        if let Some(c) = schedule_cycles.get(cycles.len()).filter(|c| c.end == turn) {
            cycles.push(CycleRecord {
                index: cycles.len() + 1,
                cycle: *c,
                at_end: Snapshot::from(&rec),
                bound: cycle_bound(&scenario.schedule, c),
            });
        }

        summary_tail.observe(&rec);
        for w in windows.iter_mut().flatten() {
            w.observe(&rec);
        }
        if wanted.binary_search(&turn).is_ok() {
            exact.push(Snapshot::from(&rec));
        }
        prev = Some(rec);
    }

    let last = prev.expect("at least one turn");
    let density_at = |n: u64| -> f64 {
        exact
            .iter()
            .find(|s| s.n == n)
            .and_then(|s| s.density)
            .unwrap_or(f64::NAN)
    };
    let summary = Summary {
        turns: last.turn,
        final_density: last.density(),
        tail_min: summary_tail.lo,
        tail_max: summary_tail.hi,
        checkpoints: scenario
            .checkpoints
            .iter()
            .map(|&n| Checkpoint { n, density: density_at(n) })
            .collect(),
    };

    let assertions: Vec<AssertionResult> = scenario
        .assertions
        .iter()
        .zip(&windows)
        .map(|(a, w)| {
            let value = match a.metric {
                Metric::TailMin => w.expect("tail window").lo,
                Metric::TailMax => w.expect("tail window").hi,
                Metric::Checkpoint => density_at(a.horizon.expect("validated")),
                Metric::PhaseBoundaryMin => {
                    let from = a.horizon.unwrap_or(1);
                    boundaries
                        .iter()
                        .filter(|b| b.n >= from)
                        .filter_map(|b| b.density)
                        .fold(f64::NAN, f64::min)
                }
            };
            AssertionResult {
                assertion: *a,
                value,
                passed: a.comparator.holds(value, a.threshold),
            }
        })
        .collect();

    let phases = game.arsonist().map(|a| a.phases().to_vec()).unwrap_or_default();
    let passed = assertions.iter().all(|a| a.passed);
    for a in &assertions {
        log::info!(
            "{}: {} -> {} ({})",
            scenario.name,
            a.assertion,
            a.value,
            if a.passed { "pass" } else { "FAIL" }
        );
    }
    Ok(RunOutcome {
        report: Report {
            name: scenario.name.clone(),
            seed: scenario.seed,
            trace_policy: policy,
            summary,
            phases,
            boundaries,
            cycles,
            assertions,
            passed,
        },
        trace: game.trace().to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    pub trace: PathBuf,
    pub summary: PathBuf,
    pub report: PathBuf,
}

fn write_file(path: &Path, contents: &str) -> Result<(), HarnessError> {
    fs::write(path, contents).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `<name>.csv`, `<name>.summary.json` and `<name>.report.json`.
pub fn write_outputs(outcome: &RunOutcome, dir: &Path) -> Result<OutputPaths, HarnessError> {
    fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let name = &outcome.report.name;
    let paths = OutputPaths {
        trace: dir.join(format!("{name}.csv")),
        summary: dir.join(format!("{name}.summary.json")),
        report: dir.join(format!("{name}.report.json")),
    };
    write_file(&paths.trace, &trace_csv(&outcome.trace))?;
    let summary = serde_json::to_string_pretty(&outcome.report.summary).expect("summary serializes");
    write_file(&paths.summary, &(summary + "\n"))?;
    let report = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
    write_file(&paths.report, &(report + "\n"))?;
    Ok(paths)
}
