//! The turn loop: grow, spread, ignite.
//!
//! A turn can be driven in one call ([`Game::play_turn`]) when both sides are
//! strategies, or in two halves ([`Game::submit_builder_move`] then
//! [`Game::submit_ignition`]) when a human supplies one side. Rejected moves
//! leave the game untouched.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, GrowingGraph, VertexId};
use crate::metrics::DensitySeries;
use crate::schedule::{GrowthSchedule, ScheduleError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Builder,
    Arsonist,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Builder => "builder",
            Role::Arsonist => "arsonist",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("builder supplied {got} vertices, schedule requires {expected}")]
    WrongCount { expected: u64, got: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("move leaves vertex {vertex} disconnected from the rest of the graph")]
    ResultDisconnected { vertex: VertexId },
    #[error("vertex {0} is already burning")]
    StrategyReturnedBurnedVertex(VertexId),
    #[error("vertex {0} does not exist")]
    StrategyReturnedUnknownVertex(VertexId),
    #[error("pass is only allowed once every vertex burns ({unburned} still unburned)")]
    IllegalPass { unburned: usize },
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("the {0} move must be supplied by a human")]
    HumanMoveRequired(Role),
    #[error("it is the {awaiting}'s move, not the {got}'s")]
    NotYourTurn { awaiting: Role, got: Role },
}

/// Vertices added by Builder in one turn. New vertices are implicit: they
/// take the next `count` dense ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuilderMove {
    pub count: usize,
    #[serde(default)]
    pub edges: Vec<(VertexId, VertexId)>,
}

impl BuilderMove {
    pub fn empty() -> Self {
        Self::default()
    }
}

/// What strategies get to look at.
#[derive(Clone, Copy)]
pub struct GameView<'a> {
    pub turn: u64,
    pub graph: &'a GrowingGraph,
    pub burn: &'a BurnState,
}

pub trait Builder: Send {
    fn name(&self) -> &str;

    fn next_move(&mut self, view: &GameView<'_>, count: usize) -> BuilderMove;
}

pub trait Arsonist: Send {
    fn name(&self) -> &str;

    /// An unburned vertex to ignite, or `None` to pass.
    fn choose(&mut self, view: &GameView<'_>) -> Option<VertexId>;

    /// Phase bookkeeping, for strategies that plan in phases.
    fn phases(&self) -> &[crate::strategies::PhaseRecord] {
        &[]
    }
}

/// Operation counters for the spread.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SpreadCounters {
    pub frontier_visits: u64,
    pub neighbor_scans: u64,
    pub new_edge_scans: u64,
}

impl SpreadCounters {
    pub fn total(&self) -> u64 {
        self.frontier_visits + self.neighbor_scans + self.new_edge_scans
    }
}

#[derive(Debug, Clone, Default)]
pub struct BurnState {
    burning: Vec<bool>,
    count: usize,
    // Vertices that caught fire in the last spread or were ignited after it.
    frontier: Vec<VertexId>,
    // Edge count of the graph at the last spread.
    seen_edges: usize,
    sources: Vec<(u64, Option<VertexId>)>,
    counters: SpreadCounters,
}

impl BurnState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_burning(&self, v: VertexId) -> bool {
        self.burning.get(v as usize).copied().unwrap_or(false)
    }

    pub fn burning_count(&self) -> usize {
        self.count
    }

    pub fn flags(&self) -> &[bool] {
        &self.burning
    }

    pub fn frontier(&self) -> &[VertexId] {
        &self.frontier
    }

    /// The sequence of fire sources, one entry per completed turn.
    pub fn sources(&self) -> &[(u64, Option<VertexId>)] {
        &self.sources
    }

    pub fn counters(&self) -> SpreadCounters {
        self.counters
    }

    pub fn unburned_count(&self) -> usize {
        self.burning.len() - self.count
    }

    /// Extends the membership bitmap to cover newly added vertices.
    pub fn sync(&mut self, graph: &GrowingGraph) {
        if self.burning.len() < graph.vertex_count() {
            self.burning.resize(graph.vertex_count(), false);
        }
    }

    /// One synchronous spread round; returns the newly burned vertices.
    ///
    /// Only neighbors of the frontier and endpoints of edges added since the
    /// previous spread can catch fire, so that is all we look at.
    pub fn spread(&mut self, graph: &GrowingGraph) -> Vec<VertexId> {
        self.sync(graph);
        let mut candidates = Vec::new();
        for &v in &self.frontier {
            self.counters.frontier_visits += 1;
            for u in graph.neighbors(v) {
                self.counters.neighbor_scans += 1;
                if !self.burning[u as usize] {
                    candidates.push(u);
                }
            }
        }
        for e in self.seen_edges..graph.edge_count() {
            self.counters.new_edge_scans += 1;
            let (a, b) = graph.edge(e as u32);
            match (self.burning[a as usize], self.burning[b as usize]) {
                (true, false) => candidates.push(b),
                (false, true) => candidates.push(a),
                _ => {}
            }
        }
        self.seen_edges = graph.edge_count();
        // Marking only after collecting keeps the round synchronous.
        let mut newly = Vec::with_capacity(candidates.len());
        for u in candidates {
            if !self.burning[u as usize] {
                self.burning[u as usize] = true;
                newly.push(u);
            }
        }
        self.count += newly.len();
        self.frontier.clone_from(&newly);
        newly
    }

    /// Marks `v` burning; it must exist and be unburned.
    pub fn ignite(&mut self, v: VertexId) -> Result<(), EngineError> {
        match self.burning.get(v as usize) {
            None => Err(EngineError::StrategyReturnedUnknownVertex(v)),
            Some(true) => Err(EngineError::StrategyReturnedBurnedVertex(v)),
            Some(false) => {
                self.burning[v as usize] = true;
                self.count += 1;
                self.frontier.push(v);
                Ok(())
            }
        }
    }

    pub fn record_source(&mut self, turn: u64, source: Option<VertexId>) {
        self.sources.push((turn, source));
    }
}

/// Reference spread: every unburned vertex with a burning neighbor catches
/// fire. Scans the whole graph.
pub fn spread_full_scan(graph: &GrowingGraph, burning: &[bool]) -> Vec<bool> {
    let mut next = burning.to_vec();
    next.resize(graph.vertex_count(), false);
    for (a, b) in graph.edges() {
        let (a, b) = (a as usize, b as usize);
        let ba = burning.get(a).copied().unwrap_or(false);
        let bb = burning.get(b).copied().unwrap_or(false);
        if ba {
            next[b] = true;
        }
        if bb {
            next[a] = true;
        }
    }
    next
}

/// Checks a Builder move against the current graph.
///
/// Assumes the current graph is connected (the engine never lets it become
/// otherwise), so only the new vertices need to be reached.
pub fn validate_builder_move(
    graph: &GrowingGraph,
    mv: &BuilderMove,
    required: u64,
) -> Result<(), EngineError> {
    if mv.count as u64 != required {
        return Err(EngineError::WrongCount {
            expected: required,
            got: mv.count as u64,
        });
    }
    graph.check_generation(mv.count, &mv.edges)?;
    if mv.count == 0 {
        return Ok(());
    }
    let base = graph.vertex_count() as u32;
    // Node 0 stands for the whole old graph, node i + 1 for new vertex base + i.
    let mut parent: Vec<u32> = (0..=mv.count as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let p = parent[parent[x as usize] as usize];
            parent[x as usize] = p;
            x = p;
        }
        x
    }
    let node = |v: VertexId| if v < base { 0 } else { v - base + 1 };
    for &(a, b) in &mv.edges {
        let (ra, rb) = (find(&mut parent, node(a)), find(&mut parent, node(b)));
        if ra != rb {
            parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
    let anchor = if base == 0 { 1 } else { 0 };
    let root = find(&mut parent, anchor);
    for i in 1..=mv.count as u32 {
        if find(&mut parent, i) != root {
            return Err(EngineError::ResultDisconnected {
                vertex: base + i - 1,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnRecord {
    #[serde(rename = "n")]
    pub turn: u64,
    pub added: u64,
    #[serde(rename = "vertices")]
    pub vertex_total: u64,
    #[serde(rename = "burning")]
    pub burning_total: u64,
    pub source: Option<VertexId>,
}

impl TurnRecord {
    pub fn density(&self) -> f64 {
        if self.vertex_total == 0 {
            f64::NAN
        } else {
            self.burning_total as f64 / self.vertex_total as f64
        }
    }
}

/// Formats `x` with `digits` significant digits (fixed notation).
pub fn format_significant(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", digits.saturating_sub(1), 0.0);
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub const CSV_HEADER: &str = "n,added,vertices,burning,density,source";

pub fn csv_line(r: &TurnRecord) -> String {
    let source = match r.source {
        Some(v) => v.to_string(),
        None => "PASS".to_string(),
    };
    format!(
        "{},{},{},{},{},{}",
        r.turn,
        r.added,
        r.vertex_total,
        r.burning_total,
        format_significant(r.density(), 10),
        source
    )
}

pub fn trace_csv(records: &[TurnRecord]) -> String {
    let mut out = String::with_capacity(32 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&csv_line(r));
        out.push('\n');
    }
    out
}

pub fn jsonl_line(r: &TurnRecord) -> String {
    let source = match r.source {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from("PASS"),
    };
    let density = if r.vertex_total == 0 {
        serde_json::Value::Null
    } else {
        serde_json::Value::from(r.density())
    };
    serde_json::json!({
        "n": r.turn,
        "added": r.added,
        "vertices": r.vertex_total,
        "burning": r.burning_total,
        "density": density,
        "source": source,
    })
    .to_string()
}

pub fn trace_jsonl(records: &[TurnRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let _ = writeln!(out, "{}", jsonl_line(r));
    }
    out
}

/// Which turn records the game keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TracePolicy {
    #[default]
    Full,
    /// Every turn up to 1000, then every ⌈n/1000⌉-th turn.
    Geometric,
}

impl TracePolicy {
    pub fn keeps(&self, turn: u64) -> bool {
        match self {
            TracePolicy::Full => true,
            TracePolicy::Geometric => turn <= 1000 || turn % turn.div_ceil(1000) == 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Schedule not yet queried for this turn.
    Start { turn: u64 },
    AwaitBuilder { turn: u64, required: u64 },
    AwaitArsonist { turn: u64, added: u64 },
}

pub struct Game {
    graph: GrowingGraph,
    burn: BurnState,
    schedule: GrowthSchedule,
    builder: Option<Box<dyn Builder>>,
    arsonist: Option<Box<dyn Arsonist>>,
    seed: u64,
    stage: Stage,
    trace: Vec<TurnRecord>,
    policy: TracePolicy,
    last_record: Option<TurnRecord>,
}

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Game")
            .field("graph", &self.graph)
            .field("burning", &self.burn.burning_count())
            .field("stage", &self.stage)
            .field("seed", &self.seed)
            .finish()
    }
}

impl Game {
    /// `None` for a side means a human supplies those moves.
    pub fn new(
        schedule: GrowthSchedule,
        builder: Option<Box<dyn Builder>>,
        arsonist: Option<Box<dyn Arsonist>>,
        seed: u64,
    ) -> Self {
        Game {
            graph: GrowingGraph::new(),
            burn: BurnState::new(),
            schedule,
            builder,
            arsonist,
            seed,
            stage: Stage::Start { turn: 1 },
            trace: Vec::new(),
            policy: TracePolicy::Full,
            last_record: None,
        }
    }

    pub fn with_trace_policy(mut self, policy: TracePolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn graph(&self) -> &GrowingGraph {
        &self.graph
    }

    pub fn burn(&self) -> &BurnState {
        &self.burn
    }

    pub fn schedule(&self) -> &GrowthSchedule {
        &self.schedule
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn trace(&self) -> &[TurnRecord] {
        &self.trace
    }

    pub fn last_record(&self) -> Option<&TurnRecord> {
        self.last_record.as_ref()
    }

    pub fn turns_completed(&self) -> u64 {
        self.last_record.map_or(0, |r| r.turn)
    }

    pub fn builder(&self) -> Option<&dyn Builder> {
        self.builder.as_deref()
    }

    pub fn arsonist(&self) -> Option<&dyn Arsonist> {
        self.arsonist.as_deref()
    }

    pub fn view(&self) -> GameView<'_> {
        let turn = match self.stage {
            Stage::Start { turn } | Stage::AwaitBuilder { turn, .. } | Stage::AwaitArsonist { turn, .. } => {
                turn
            }
        };
        GameView {
            turn,
            graph: &self.graph,
            burn: &self.burn,
        }
    }

    /// Whose move the game is waiting for.
    pub fn awaiting(&self) -> Role {
        match self.stage {
            Stage::AwaitArsonist { .. } => Role::Arsonist,
            _ => Role::Builder,
        }
    }

    /// f(n) for the turn in progress, querying the schedule on first use.
    pub fn required_count(&mut self) -> Result<u64, EngineError> {
        match self.stage {
            Stage::Start { turn } => {
                let required = self
                    .schedule
                    .next_count(turn, self.graph.vertex_count() as u64)?;
                self.stage = Stage::AwaitBuilder { turn, required };
                Ok(required)
            }
            Stage::AwaitBuilder { required, .. } => Ok(required),
            Stage::AwaitArsonist { .. } => Err(EngineError::NotYourTurn {
                awaiting: Role::Arsonist,
                got: Role::Builder,
            }),
        }
    }

    /// Validates and applies Builder's move, then spreads the fire.
    pub fn submit_builder_move(&mut self, mv: &BuilderMove) -> Result<Vec<VertexId>, EngineError> {
        let required = self.required_count()?;
        let Stage::AwaitBuilder { turn, .. } = self.stage else {
            unreachable!("required_count leaves the game awaiting Builder");
        };
        validate_builder_move(&self.graph, mv, required)?;
        self.graph.add_generation(turn, mv.count, &mv.edges)?;
        let newly = self.burn.spread(&self.graph);
        self.stage = Stage::AwaitArsonist {
            turn,
            added: mv.count as u64,
        };
        Ok(newly)
    }

    /// Ignites Arsonist's choice (or records a pass) and closes the turn.
    pub fn submit_ignition(&mut self, source: Option<VertexId>) -> Result<TurnRecord, EngineError> {
        let Stage::AwaitArsonist { turn, added } = self.stage else {
            return Err(EngineError::NotYourTurn {
                awaiting: Role::Builder,
                got: Role::Arsonist,
            });
        };
        match source {
            Some(v) => self.burn.ignite(v)?,
            None if self.burn.unburned_count() > 0 => {
                return Err(EngineError::IllegalPass {
                    unburned: self.burn.unburned_count(),
                })
            }
            None => {}
        }
        self.burn.record_source(turn, source);
        let record = TurnRecord {
            turn,
            added,
            vertex_total: self.graph.vertex_count() as u64,
            burning_total: self.burn.burning_count() as u64,
            source,
        };
        if self.policy.keeps(turn) {
            self.trace.push(record);
        }
        self.last_record = Some(record);
        self.stage = Stage::Start { turn: turn + 1 };
        Ok(record)
    }

    /// Runs the Builder sub-step with the Builder strategy.
    pub fn auto_builder(&mut self) -> Result<Vec<VertexId>, EngineError> {
        let required = self.required_count()?;
        let view = GameView {
            turn: self.view().turn,
            graph: &self.graph,
            burn: &self.burn,
        };
        let builder = self
            .builder
            .as_mut()
            .ok_or(EngineError::HumanMoveRequired(Role::Builder))?;
        let mv = builder.next_move(&view, required as usize);
        self.submit_builder_move(&mv)
    }

    /// Runs the Arsonist sub-step with the Arsonist strategy. A human
    /// Arsonist facing a fully burned graph passes automatically.
    pub fn auto_arsonist(&mut self) -> Result<TurnRecord, EngineError> {
        if !matches!(self.stage, Stage::AwaitArsonist { .. }) {
            return Err(EngineError::NotYourTurn {
                awaiting: Role::Builder,
                got: Role::Arsonist,
            });
        }
        let view = GameView {
            turn: self.view().turn,
            graph: &self.graph,
            burn: &self.burn,
        };
        let choice = match self.arsonist.as_mut() {
            Some(a) => a.choose(&view),
            None if self.burn.unburned_count() == 0 => None,
            None => return Err(EngineError::HumanMoveRequired(Role::Arsonist)),
        };
        self.submit_ignition(choice)
    }

    pub fn play_turn(&mut self) -> Result<TurnRecord, EngineError> {
        if !matches!(self.stage, Stage::AwaitArsonist { .. }) {
            self.auto_builder()?;
        }
        self.auto_arsonist()
    }

    /// Plays `turns` more turns and returns the retained density series.
    pub fn run(&mut self, turns: u64) -> Result<DensitySeries, EngineError> {
        for _ in 0..turns {
            self.play_turn()?;
        }
        Ok(self.density_series())
    }

    pub fn density_series(&self) -> DensitySeries {
        DensitySeries::from_records(&self.trace)
    }
}
