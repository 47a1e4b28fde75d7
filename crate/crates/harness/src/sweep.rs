//! Parameter sweeps: a scenario template crossed with a grid of overrides.
//!
//! A grid is a JSON object mapping dotted paths into the scenario
//! (`"schedule.alpha"`, `"seed"`) to arrays of values. Every combination is
//! run as an independent game.

use std::fmt::Write as _;

use pyreline_core::engine::{csv_line, format_significant, CSV_HEADER};
use rayon::prelude::*;
use serde_json::Value;

use crate::run::{run_scenario, RunOutcome};
use crate::scenario::Scenario;
use crate::{worker_threads, HarnessError};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<(String, Vec<Value>)>,
}

impl Grid {
    pub fn new(axes: Vec<(String, Vec<Value>)>) -> Result<Self, HarnessError> {
        if axes.is_empty() || axes.iter().any(|(_, v)| v.is_empty()) {
            return Err(HarnessError::EmptyGrid);
        }
        Ok(Grid { axes })
    }

    pub fn from_json(text: &str, source_name: &str) -> Result<Self, HarnessError> {
        let value: Value = serde_json::from_str(text).map_err(|e| HarnessError::parse(source_name, &e))?;
        let Value::Object(map) = value else {
            return Err(HarnessError::field("grid", "must be an object of path -> array"));
        };
        let mut axes = Vec::with_capacity(map.len());
        for (key, v) in map {
            match v {
                Value::Array(values) => axes.push((key, values)),
                _ => return Err(HarnessError::field(format!("grid.{key}"), "must be an array")),
            }
        }
        Grid::new(axes)
    }

    pub fn keys(&self) -> Vec<&str> {
        self.axes.iter().map(|(k, _)| k.as_str()).collect()
    }

    /// All combinations, first axis varying slowest.
    pub fn combinations(&self) -> Vec<Vec<(String, Value)>> {
        let mut out: Vec<Vec<(String, Value)>> = vec![Vec::new()];
        for (key, values) in &self.axes {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |v| {
                        let mut next = prefix.clone();
                        next.push((key.clone(), v.clone()));
                        next
                    })
                })
                .collect();
        }
        out
    }
}

fn set_path(target: &mut Value, path: &str, value: Value) -> Result<(), HarnessError> {
    let mut cur = target;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let Value::Object(map) = cur else {
            return Err(HarnessError::field(path, "does not lead into an object"));
        };
        if i + 1 == parts.len() {
            map.insert(part.to_string(), value);
            return Ok(());
        }
        cur = map
            .get_mut(*part)
            .ok_or_else(|| HarnessError::field(path, format!("template has no `{part}`")))?;
    }
    unreachable!("split yields at least one part")
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub index: usize,
    pub params: Vec<(String, Value)>,
    pub outcome: RunOutcome,
}

/// Expands the grid into validated scenarios named `<template>-<index>`.
pub fn expand(template: &Scenario, grid: &Grid) -> Result<Vec<(Vec<(String, Value)>, Scenario)>, HarnessError> {
    let base = serde_json::to_value(template).expect("scenario serializes");
    grid.combinations()
        .into_iter()
        .enumerate()
        .map(|(i, params)| {
            let mut v = base.clone();
            for (path, value) in &params {
                set_path(&mut v, path, value.clone())?;
            }
            set_path(&mut v, "name", Value::from(format!("{}-{i:03}", template.name)))?;
            let label = params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(", ");
            let scenario: Scenario = serde_json::from_value(v)
                .map_err(|e| HarnessError::field(format!("grid[{label}]"), e.to_string()))?;
            scenario.validate().map_err(|e| match e {
                HarnessError::Field { field, message } => HarnessError::field(format!("grid[{label}].{field}"), message),
                other => other,
            })?;
            Ok((params, scenario))
        })
        .collect()
}

pub fn sweep(template: &Scenario, grid: &Grid) -> Result<Vec<SweepRow>, HarnessError> {
    let jobs = expand(template, grid)?;
    let work = || -> Result<Vec<SweepRow>, HarnessError> {
        jobs.into_par_iter()
            .enumerate()
            .map(|(index, (params, scenario))| {
                run_scenario(&scenario).map(|outcome| SweepRow {
                    index,
                    params,
                    outcome,
                })
            })
            .collect()
    };
    match worker_threads() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(work),
        None => work(),
    }
}

fn param_cells(params: &[(String, Value)]) -> String {
    params
        .iter()
        .map(|(_, v)| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// One row per combination: parameters, then the summary.
pub fn summary_csv(grid: &Grid, rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "index,{},name,turns,final_density,tail_min,tail_max,passed",
        grid.keys().join(",")
    );
    for row in rows {
        let s = &row.outcome.report.summary;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.index,
            param_cells(&row.params),
            row.outcome.report.name,
            s.turns,
            format_significant(s.final_density, 10),
            format_significant(s.tail_min, 10),
            format_significant(s.tail_max, 10),
            row.outcome.report.passed
        );
    }
    out
}

/// Every trace, each line prefixed with its combination's parameters.
pub fn combined_trace_csv(grid: &Grid, rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{},{}", grid.keys().join(","), CSV_HEADER);
    for row in rows {
        let prefix = param_cells(&row.params);
        for r in &row.outcome.trace {
            let _ = writeln!(out, "{prefix},{}", csv_line(r));
        }
    }
    out
}
