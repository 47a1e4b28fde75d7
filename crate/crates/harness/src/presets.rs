//! Named scenarios reproducing the propositions and examples.

use pyreline_core::schedule::ScheduleDescriptor;
use serde::Serialize;

use crate::dominance::DominanceConfig;
use crate::scenario::{Assertion, Comparator, Metric, Scenario, SCHEMA_VERSION};

pub const PRESET_NAMES: &[&str] = &[
    "prop31-poly",
    "prop31-poly-a0.3",
    "prop31-poly-a0.75",
    "prop32-linear",
    "prop32-3n",
    "ex1",
    "ex2",
    "ex3",
    "rrt-random",
    "tree-dominance",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Preset {
    Game(Scenario),
    TreeDominance(DominanceConfig),
}

fn game(name: &str, schedule: ScheduleDescriptor, builder: &str, arsonist: &str, turns: u64) -> Scenario {
    Scenario {
        schema: SCHEMA_VERSION,
        name: name.to_string(),
        schedule,
        builder: builder.to_string(),
        arsonist: arsonist.to_string(),
        turns,
        seed: 1,
        warmup: None,
        tail_fraction: 0.5,
        checkpoints: Vec::new(),
        assertions: Vec::new(),
    }
}

fn assert(metric: Metric, comparator: Comparator, threshold: f64, horizon: Option<u64>) -> Assertion {
    Assertion {
        metric,
        comparator,
        threshold,
        horizon,
    }
}

fn prop31(name: &str, alpha: f64, turns: u64) -> Scenario {
    let mut s = game(name, ScheduleDescriptor::Poly { c: 1.0, alpha }, "path", "phase", turns);
    s.checkpoints = vec![turns / 10, turns / 2, turns];
    s
}

pub fn preset(name: &str) -> Option<Preset> {
    let scenario = match name {
        "prop31-poly" => {
            let mut s = prop31(name, 0.5, 100_000);
            s.assertions = vec![assert(Metric::PhaseBoundaryMin, Comparator::Ge, 0.85, Some(50_000))];
            s
        }
        "prop31-poly-a0.3" => prop31(name, 0.3, 100_000),
        "prop31-poly-a0.75" => prop31(name, 0.75, 10_000),
        "prop32-linear" => {
            let mut s = game(name, ScheduleDescriptor::Linear { c: 1.0 }, "path", "greedy", 10_000);
            s.assertions = vec![assert(Metric::TailMax, Comparator::Le, 0.85, None)];
            s
        }
        "prop32-3n" => {
            let mut s = game(name, ScheduleDescriptor::Linear { c: 3.0 }, "path", "greedy", 5_000);
            s.assertions = vec![assert(Metric::TailMax, Comparator::Le, 0.72, None)];
            s
        }
        // Six cycles: the cycle-end bound first drops below 1 in the sixth.
        "ex1" => game(name, ScheduleDescriptor::Example1 { alpha: 0.25 }, "path", "greedy", 5_308_423),
        // Eight cycles.
        "ex2" => game(
            name,
            ScheduleDescriptor::Example2 { alpha: 0.75, eps: 0.1 },
            "path",
            "greedy",
            3_661,
        ),
        // Eight cycles.
        "ex3" => game(
            name,
            ScheduleDescriptor::Example3 {
                alpha: 0.5,
                beta: 1.0,
                eps: 0.25,
            },
            "path",
            "phase",
            6_776,
        ),
        "rrt-random" => {
            let mut s = game(name, ScheduleDescriptor::Poly { c: 1.0, alpha: 0.5 }, "rrt", "random", 10_000);
            s.checkpoints = vec![1_000, 5_000, 10_000];
            s
        }
        "tree-dominance" => return Some(Preset::TreeDominance(DominanceConfig::default())),
        _ => return None,
    };
    Some(Preset::Game(scenario))
}
