use pyreline_core::engine::trace_csv;
use pyreline_core::schedule::ScheduleDescriptor;
use pyreline_harness::presets::{preset, Preset, PRESET_NAMES};
use pyreline_harness::run::{run_scenario, write_outputs};
use pyreline_harness::scenario::{Scenario, SCHEMA_VERSION};
use pyreline_harness::sweep::{sweep, Grid};
use pyreline_harness::HarnessError;
use proptest::prelude::*;
use serde_json::json;

fn small(turns: u64) -> Scenario {
    let checkpoints: Vec<u64> = [7, 50, turns].into_iter().filter(|&c| c <= turns).collect();
    Scenario::from_json(
        &json!({
            "schema": SCHEMA_VERSION,
            "name": "small",
            "schedule": {"kind": "poly", "c": 1.0, "alpha": 0.5},
            "builder": "rrt",
            "arsonist": "random",
            "turns": turns,
            "seed": 9,
            "checkpoints": checkpoints
        })
        .to_string(),
        "small.json",
    )
    .unwrap()
}

#[test]
fn runs_are_deterministic_byte_for_byte() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let s = small(300);
    let pa = write_outputs(&run_scenario(&s).unwrap(), a.path()).unwrap();
    let pb = write_outputs(&run_scenario(&s).unwrap(), b.path()).unwrap();
    for (x, y) in [(pa.trace, pb.trace), (pa.summary, pb.summary), (pa.report, pb.report)] {
        assert_eq!(std::fs::read(&x).unwrap(), std::fs::read(&y).unwrap(), "{}", x.display());
    }
}

#[test]
fn a_single_turn_burns_everything() {
    let outcome = run_scenario(&small(1)).unwrap();
    assert_eq!(outcome.trace.len(), 1);
    assert_eq!(outcome.report.summary.final_density, 1.0);
}

#[test]
fn checkpoints_agree_with_the_trace() {
    let outcome = run_scenario(&small(300)).unwrap();
    for c in &outcome.report.summary.checkpoints {
        let r = &outcome.trace[c.n as usize - 1];
        assert_eq!(r.turn, c.n);
        assert_eq!(r.density(), c.density);
    }
    assert_eq!(outcome.report.summary.checkpoints.len(), 3);
    assert!(trace_csv(&outcome.trace).lines().count() == 301);
}

#[test]
fn alpha_grid_gives_one_summary_per_value() {
    let grid = Grid::from_json(r#"{"schedule.alpha": [0.3, 0.5, 0.75]}"#, "grid.json").unwrap();
    let rows = sweep(&small(200), &grid).unwrap();
    assert_eq!(rows.len(), 3);
    let finals: Vec<u64> = rows.iter().map(|r| r.outcome.trace.last().unwrap().vertex_total).collect();
    assert!(finals[0] < finals[1] && finals[1] < finals[2], "{finals:?}");
    for (row, alpha) in rows.iter().zip([0.3, 0.5, 0.75]) {
        assert_eq!(row.params[0].1, json!(alpha));
    }
}

#[test]
fn seed_grid_gives_distinct_traces_with_one_schema() {
    let grid = Grid::from_json(r#"{"seed": [1, 2, 3]}"#, "grid.json").unwrap();
    let rows = sweep(&small(200), &grid).unwrap();
    let traces: Vec<String> = rows.iter().map(|r| trace_csv(&r.outcome.trace)).collect();
    assert_eq!(traces.len(), 3);
    assert!(traces[0] != traces[1] && traces[1] != traces[2] && traces[0] != traces[2]);
    let headers: Vec<&str> = traces.iter().map(|t| t.lines().next().unwrap()).collect();
    assert!(headers.iter().all(|h| *h == headers[0]));
    let names: Vec<&str> = rows.iter().map(|r| r.outcome.report.name.as_str()).collect();
    assert_eq!(names, ["small-000", "small-001", "small-002"]);
}

#[test]
fn empty_grids_are_errors() {
    assert!(matches!(Grid::from_json("{}", "g"), Err(HarnessError::EmptyGrid)));
    assert!(matches!(Grid::from_json(r#"{"seed": []}"#, "g"), Err(HarnessError::EmptyGrid)));
}

#[test]
fn grid_values_are_validated_like_scenarios() {
    let grid = Grid::from_json(r#"{"schedule.c": [1.0, 0.5]}"#, "g").unwrap();
    let err = sweep(&small(10), &grid).unwrap_err().to_string();
    assert!(err.contains("grid"), "{err}");
}

#[test]
fn scenario_errors_name_the_field() {
    let mut v = json!({
        "schema": 1, "name": "x", "schedule": {"kind": "constant", "value": 1},
        "builder": "path", "arsonist": "greedy", "turns": 0, "seed": 1
    });
    let err = Scenario::from_json(&v.to_string(), "x.json").unwrap_err().to_string();
    assert!(err.contains("turns"), "{err}");
    v["turns"] = json!(10);
    v["schema"] = json!(2);
    let err = Scenario::from_json(&v.to_string(), "x.json").unwrap_err().to_string();
    assert!(err.contains("schema"), "{err}");
    v["schema"] = json!(1);
    v["unexpected"] = json!(true);
    let err = Scenario::from_json(&v.to_string(), "x.json").unwrap_err().to_string();
    assert!(err.contains("x.json") && err.contains("unexpected"), "{err}");
}

#[test]
fn every_preset_is_valid() {
    for name in PRESET_NAMES {
        match preset(name).unwrap() {
            Preset::Game(s) => {
                s.validate().unwrap();
                assert_eq!(&s.name, name);
            }
            Preset::TreeDominance(c) => assert!(c.samples > 0),
        }
    }
    assert!(preset("nope").is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scenarios_round_trip_through_json(alpha in 0.05f64..0.95, turns in 1u64..10_000, seed: u64) {
        let mut s = small(turns);
        s.schedule = ScheduleDescriptor::Poly { c: 1.0, alpha };
        s.seed = seed;
        s.checkpoints = vec![turns];
        let back = Scenario::from_json(&s.to_json_pretty(), "rt").unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn grids_expand_to_the_cartesian_product(sizes in prop::collection::vec(1usize..4, 1..4)) {
        let axes = sizes
            .iter()
            .enumerate()
            .map(|(i, &k)| (format!("axis{i}"), (0..k).map(|j| json!(j)).collect()))
            .collect();
        let grid = Grid::new(axes).unwrap();
        let combos = grid.combinations();
        prop_assert_eq!(combos.len(), sizes.iter().product::<usize>());
        // First axis varies slowest.
        let firsts: Vec<_> = combos.iter().map(|c| c[0].1.clone()).collect();
        let mut sorted = firsts.clone();
        sorted.sort_by_key(|v| v.as_u64());
        prop_assert_eq!(firsts, sorted);
    }

    #[test]
    fn densities_stay_in_unit_interval(seed in 0u64..1000, alpha in 0.1f64..0.9) {
        let mut s = small(60);
        s.seed = seed;
        s.schedule = ScheduleDescriptor::Poly { c: 1.0, alpha };
        let outcome = run_scenario(&s).unwrap();
        for r in &outcome.trace {
            prop_assert!(r.burning_total <= r.vertex_total && r.burning_total >= 1);
        }
        let sm = &outcome.report.summary;
        prop_assert!(0.0 < sm.tail_min && sm.tail_min <= sm.tail_max && sm.tail_max <= 1.0);
    }
}
