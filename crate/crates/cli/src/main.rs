use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use pyreline_core::burning_number::{exact_burning_number_with, ExactOptions, MAX_EXACT_CAP};
use pyreline_core::graph::GrowingGraph;
use pyreline_harness::dominance::{verify_tree_dominance, DominanceConfig};
use pyreline_harness::presets::{preset, Preset, PRESET_NAMES};
use pyreline_harness::run::{run_scenario, write_outputs, RunOutcome};
use pyreline_harness::scenario::Scenario;
use pyreline_harness::sweep::{combined_trace_csv, summary_csv, sweep, Grid};
use pyreline_service::AppState;

#[derive(Parser)]
#[command(name = "pyreline", version, about = "Adversarial graph burning: scenarios, sweeps, solver and game server")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its trace, summary and report.
    Run {
        scenario: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a scenario template over every combination in a parameter grid.
    Sweep {
        template: PathBuf,
        grid: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a named preset, or print it with --print.
    Preset {
        /// Preset name; omit to list them.
        name: Option<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        print: bool,
    },
    /// Exact burning number of a graph in edge-list format.
    Exact {
        graph: PathBuf,
        #[arg(long, default_value_t = 64)]
        cap: usize,
        /// Give up after this many search nodes.
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Check tree burning never outpaces graph burning on random constructions.
    VerifyTreeDominance {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        turns: u64,
    },
    /// Serve the interactive game API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

fn report_run(outcome: &RunOutcome, out: &Path) -> Result<bool> {
    let paths = write_outputs(outcome, out)?;
    let r = &outcome.report;
    println!(
        "{}: {} turns, final density {:.6}, tail [{:.6}, {:.6}]",
        r.name, r.summary.turns, r.summary.final_density, r.summary.tail_min, r.summary.tail_max
    );
    for a in &r.assertions {
        println!(
            "  {} {}: value {:.6}",
            if a.passed { "PASS" } else { "FAIL" },
            a.assertion,
            a.value
        );
    }
    for c in &r.cycles {
        let bound = c
            .bound
            .map(|b| format!(", {:?} bound {:.4}", b.kind, b.value).to_lowercase())
            .unwrap_or_default();
        println!(
            "  cycle {}: N1={} N2={} density {:.6}{}",
            c.index,
            c.cycle.threshold_turn,
            c.cycle.end,
            c.at_end.density.unwrap_or(f64::NAN),
            bound
        );
    }
    println!("  wrote {}, {}, {}", paths.trace.display(), paths.summary.display(), paths.report.display());
    Ok(r.passed)
}

fn run_dominance(config: &DominanceConfig) -> Result<bool> {
    let report = verify_tree_dominance(config)?;
    println!(
        "tree dominance: {} samples, {} turns checked, {} violations, {} samples with strict inequality",
        report.samples, report.turns_checked, report.violations, report.strict_samples
    );
    for f in &report.failures {
        println!("  {f}");
    }
    Ok(report.passed())
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { scenario, out } => {
            let scenario = Scenario::load(&scenario)?;
            report_run(&run_scenario(&scenario)?, &out)
        }
        Command::Sweep { template, grid, out } => {
            let template = Scenario::load(&template)?;
            let text = std::fs::read_to_string(&grid).with_context(|| format!("reading {}", grid.display()))?;
            let grid = Grid::from_json(&text, &grid.display().to_string())?;
            let rows = sweep(&template, &grid)?;
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let summary = out.join(format!("{}.sweep.csv", template.name));
            let traces = out.join(format!("{}.sweep-traces.csv", template.name));
            write(&summary, &summary_csv(&grid, &rows))?;
            write(&traces, &combined_trace_csv(&grid, &rows))?;
            let mut all = true;
            for row in &rows {
                all &= report_run(&row.outcome, &out)?;
            }
            println!("wrote {} and {}", summary.display(), traces.display());
            Ok(all)
        }
        Command::Preset { name: None, .. } => {
            for name in PRESET_NAMES {
                println!("{name}");
            }
            Ok(true)
        }
        Command::Preset {
            name: Some(name),
            out,
            print,
        } => {
            let Some(p) = preset(&name) else {
                bail!("unknown preset `{name}`; try one of {}", PRESET_NAMES.join(", "));
            };
            match p {
                Preset::Game(s) if print => {
                    println!("{}", s.to_json_pretty());
                    Ok(true)
                }
                Preset::Game(s) => report_run(&run_scenario(&s)?, &out),
                Preset::TreeDominance(c) if print => {
                    println!("{}", serde_json::to_string_pretty(&c)?);
                    Ok(true)
                }
                Preset::TreeDominance(c) => run_dominance(&c),
            }
        }
        Command::Exact { graph, cap, node_limit } => {
            if cap > MAX_EXACT_CAP {
                bail!("--cap is at most {MAX_EXACT_CAP}");
            }
            let text = std::fs::read_to_string(&graph).with_context(|| format!("reading {}", graph.display()))?;
            let g = GrowingGraph::from_edge_list(&text).with_context(|| format!("parsing {}", graph.display()))?;
            let (b, schedule) = exact_burning_number_with(&g, &ExactOptions { cap, node_limit })?;
            println!("b={b}");
            let sources: Vec<String> = schedule.sources.iter().map(|v| v.to_string()).collect();
            println!("schedule: {}", sources.join(" "));
            Ok(true)
        }
        Command::VerifyTreeDominance { samples, seed, turns } => run_dominance(&DominanceConfig {
            samples,
            seed,
            turns,
            ..DominanceConfig::default()
        }),
        Command::Serve { port, host } => {
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .with_context(|| format!("bad address {host}:{port}"))?;
            let state = AppState::from_env().context("opening PYRELINE_DATA_DIR")?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(pyreline_service::serve(addr, state))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
