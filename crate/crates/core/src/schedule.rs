//! Growth schedules: how many vertices Builder receives on each turn.
//!
//! Most kinds are closed-form functions of the turn. The three fluctuating
//! kinds (`example1`..`example3`) are history-adaptive: they alternate between
//! a waiting phase that lasts until a threshold on the running vertex total is
//! met, and a burst phase of fixed length. Thresholds are checked against the
//! exact running total on the first turn that satisfies them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("turn {got} queried after turn {last}; schedules advance strictly forward")]
    NonMonotoneQuery { last: u64, got: u64 },
    #[error("invalid schedule parameters: {0}")]
    InvalidParams(String),
}

/// Serialized form of a schedule, as embedded in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ScheduleDescriptor {
    Constant { value: u64 },
    Poly { c: f64, alpha: f64 },
    Linear { c: f64 },
    Example1 { alpha: f64 },
    Example2 { alpha: f64, eps: f64 },
    Example3 { alpha: f64, beta: f64, eps: f64 },
    Table { values: Vec<u64>, tail: TailRule },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailRule {
    RepeatLast,
    Poly { c: f64, alpha: f64 },
}

/// One completed or in-progress cycle of an adaptive schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cycle {
    /// Last turn of the previous cycle (0 for the first).
    pub start: u64,
    /// Turn on which the waiting-phase threshold was met.
    pub threshold_turn: u64,
    /// Last turn of the burst phase.
    pub end: u64,
    /// Vertex total at `threshold_turn`.
    pub vertices_at_threshold: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Steady,
    Waiting { since: u64 },
    Burst { threshold_turn: u64, end: u64 },
}

#[derive(Debug, Clone)]
pub struct GrowthSchedule {
    descriptor: ScheduleDescriptor,
    phase: Phase,
    last_turn: u64,
    cycles: Vec<Cycle>,
}

fn floor_pow(n: u64, exponent: f64) -> u64 {
    (n as f64).powf(exponent).floor() as u64
}

fn ceil_sqrt(x: u64) -> u64 {
    let r = x.isqrt();
    if r * r >= x {
        r
    } else {
        r + 1
    }
}

fn check(ok: bool, msg: &str) -> Result<(), ScheduleError> {
    if ok {
        Ok(())
    } else {
        Err(ScheduleError::InvalidParams(msg.to_string()))
    }
}

fn finite(xs: &[f64]) -> bool {
    xs.iter().all(|x| x.is_finite())
}

impl ScheduleDescriptor {
    pub fn validate(&self) -> Result<(), ScheduleError> {
        use ScheduleDescriptor::*;
        match *self {
            Constant { value } => check(value >= 1, "constant value must be at least 1"),
            Poly { c, alpha } => check(
                finite(&[c, alpha]) && c >= 1.0 && alpha >= 0.0,
                "poly requires c >= 1 and alpha >= 0",
            ),
            Linear { c } => check(c.is_finite() && c >= 1.0, "linear requires c >= 1"),
            Example1 { alpha } => check(
                alpha.is_finite() && alpha > 0.0 && alpha < 0.5,
                "example1 requires 0 < alpha < 1/2",
            ),
            Example2 { alpha, eps } => check(
                finite(&[alpha, eps]) && (0.5..1.0).contains(&alpha) && eps > 0.0 && eps < 0.125,
                "example2 requires 1/2 <= alpha < 1 and 0 < eps < 1/8",
            ),
            Example3 { alpha, beta, eps } => check(
                finite(&[alpha, beta, eps])
                    && alpha > 0.0
                    && alpha < 1.0
                    && beta > 0.0
                    && eps > 0.0
                    && eps < 0.5,
                "example3 requires 0 < alpha < 1, beta > 0 and 0 < eps < 1/2",
            ),
            Table { ref values, ref tail } => match tail {
                TailRule::RepeatLast => check(
                    !values.is_empty(),
                    "table with repeat-last tail needs at least one value",
                ),
                TailRule::Poly { c, alpha } => check(
                    finite(&[*c, *alpha]) && *c >= 1.0 && *alpha >= 0.0,
                    "poly tail requires c >= 1 and alpha >= 0",
                ),
            },
        }
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(
            self,
            ScheduleDescriptor::Example1 { .. }
                | ScheduleDescriptor::Example2 { .. }
                | ScheduleDescriptor::Example3 { .. }
        )
    }
}

impl GrowthSchedule {
    pub fn new(descriptor: ScheduleDescriptor) -> Result<Self, ScheduleError> {
        descriptor.validate()?;
        let phase = if descriptor.is_adaptive() {
            Phase::Waiting { since: 0 }
        } else {
            Phase::Steady
        };
        Ok(GrowthSchedule {
            descriptor,
            phase,
            last_turn: 0,
            cycles: Vec::new(),
        })
    }

    pub fn constant(value: u64) -> Result<Self, ScheduleError> {
        Self::new(ScheduleDescriptor::Constant { value })
    }

    pub fn poly(c: f64, alpha: f64) -> Result<Self, ScheduleError> {
        Self::new(ScheduleDescriptor::Poly { c, alpha })
    }

    pub fn linear(c: f64) -> Result<Self, ScheduleError> {
        Self::new(ScheduleDescriptor::Linear { c })
    }

    pub fn descriptor(&self) -> &ScheduleDescriptor {
        &self.descriptor
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Human-readable name of the current phase.
    pub fn phase_label(&self) -> &'static str {
        use ScheduleDescriptor::*;
        match (&self.descriptor, self.phase) {
            (_, Phase::Steady) => "steady",
            (Example1 { .. }, Phase::Waiting { .. }) => "zero",
            (Example1 { .. }, Phase::Burst { .. }) => "growth",
            (Example2 { .. }, Phase::Waiting { .. }) => "slow",
            (Example2 { .. }, Phase::Burst { .. }) => "fast",
            (Example3 { .. }, Phase::Waiting { .. }) => "linear",
            (Example3 { .. }, Phase::Burst { .. }) => "slow",
            _ => "steady",
        }
    }

    /// Cycles whose threshold has been reached so far.
    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn last_turn(&self) -> u64 {
        self.last_turn
    }

    /// A copy of this schedule rewound to before turn 1.
    pub fn fresh(&self) -> GrowthSchedule {
        GrowthSchedule::new(self.descriptor.clone()).expect("descriptor was validated")
    }

    /// Returns f(turn) given the vertex total before this turn.
    pub fn next_count(&mut self, turn: u64, cumulative_total: u64) -> Result<u64, ScheduleError> {
        if turn <= self.last_turn {
            return Err(ScheduleError::NonMonotoneQuery {
                last: self.last_turn,
                got: turn,
            });
        }
        self.last_turn = turn;
        let n = turn;
        let nf = n as f64;
        use ScheduleDescriptor::*;
        let count = match self.descriptor {
            Constant { value } => value,
            Poly { c, alpha } => (c * nf.powf(alpha)).floor() as u64,
            Linear { c } => (c * nf).floor() as u64,
            Table {
                ref values,
                ref tail,
            } => match values.get(n as usize - 1) {
                Some(&v) => v,
                None => match *tail {
                    TailRule::RepeatLast => *values.last().expect("validated non-empty"),
                    TailRule::Poly { c, alpha } => (c * nf.powf(alpha)).floor() as u64,
                },
            },
            Example1 { alpha } => match self.phase {
                Phase::Burst { end, .. } => {
                    if n >= end {
                        self.phase = Phase::Waiting { since: end };
                    }
                    floor_pow(n, alpha)
                }
                _ => {
                    // f(n) = 0 here, so the total after this turn is unchanged.
                    if (cumulative_total as f64) < nf.powf(alpha) {
                        let end = n + floor_pow(n, alpha / 2.0);
                        self.start_burst(n, end, cumulative_total);
                    }
                    0
                }
            },
            Example2 { alpha, eps } => match self.phase {
                Phase::Burst { end, .. } => {
                    if n >= end {
                        self.phase = Phase::Waiting { since: end };
                    }
                    floor_pow(n, alpha)
                }
                _ => {
                    let f = floor_pow(n, 2.0 * alpha - 1.0);
                    let total = cumulative_total + f;
                    let scale = nf.powf(2.0 * alpha);
                    if (total as f64 - scale / (2.0 * alpha)).abs() <= eps * scale {
                        let end = n + floor_pow(n, alpha);
                        self.start_burst(n, end, total);
                    }
                    f
                }
            },
            Example3 { alpha, beta, eps } => match self.phase {
                Phase::Burst { end, .. } => {
                    if n >= end {
                        self.phase = Phase::Waiting { since: end };
                    }
                    floor_pow(n, alpha)
                }
                _ => {
                    let f = (beta * nf).ceil() as u64 + 1;
                    let total = cumulative_total + f;
                    if total as f64 > (1.0 - eps) * beta / 2.0 * nf * nf {
                        let end = n + ceil_sqrt(2 * total);
                        self.start_burst(n, end, total);
                    }
                    f
                }
            },
        };
        Ok(count)
    }

    fn start_burst(&mut self, threshold_turn: u64, end: u64, total: u64) {
        let since = match self.phase {
            Phase::Waiting { since } => since,
            _ => 0,
        };
        self.cycles.push(Cycle {
            start: since,
            threshold_turn,
            end,
            vertices_at_threshold: total,
        });
        self.phase = Phase::Burst {
            threshold_turn,
            end,
        };
    }

    /// Σ_{k=1..n} f(k), computed on a fresh replay of this schedule.
    pub fn cumulative_through(&self, n: u64) -> u64 {
        let mut replay = self.fresh();
        let mut total = 0;
        for k in 1..=n {
            total += replay
                .next_count(k, total)
                .expect("fresh replay queries turns in order");
        }
        total
    }

    /// The first `n` values of a fresh replay.
    pub fn sequence(&self, n: u64) -> Vec<u64> {
        let mut replay = self.fresh();
        let mut total = 0;
        (1..=n)
            .map(|k| {
                let f = replay.next_count(k, total).expect("in order");
                total += f;
                f
            })
            .collect()
    }
}
