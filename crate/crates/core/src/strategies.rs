//! Builder and Arsonist strategies.
//!
//! All randomness comes from a ChaCha8 generator seeded from the game seed,
//! with Builder and Arsonist on separate streams, so a game is a pure
//! function of (schedule, strategy names, seed).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::burning_number::{plan_burn_hinted, PlanOptions, PlannerTier};
use crate::engine::{Arsonist, Builder, BuilderMove, GameView};
use crate::graph::{GraphSnapshot, GrowingGraph, VertexId};

pub const BUILDER_NAMES: &[&str] = &["path", "star", "rrt"];
pub const ARSONIST_NAMES: &[&str] = &["phase", "greedy", "random"];
/// Stands for "a person supplies these moves" in scenario files and the API.
pub const HUMAN: &str = "human";

const BUILDER_STREAM: u64 = 1;
const ARSONIST_STREAM: u64 = 2;

pub fn strategy_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {role} strategy `{name}`")]
pub struct UnknownStrategy {
    pub role: &'static str,
    pub name: String,
}

pub fn builder_by_name(name: &str, seed: u64) -> Result<Box<dyn Builder>, UnknownStrategy> {
    match name {
        "path" => Ok(Box::new(PathBuilder::new())),
        "star" => Ok(Box::new(StarBuilder)),
        "rrt" => Ok(Box::new(RandomRecursiveBuilder::new(seed))),
        _ => Err(UnknownStrategy {
            role: "builder",
            name: name.to_string(),
        }),
    }
}

pub fn arsonist_by_name(name: &str, seed: u64) -> Result<Box<dyn Arsonist>, UnknownStrategy> {
    arsonist_with_config(name, seed, PhaseConfig::default())
}

pub fn arsonist_with_config(
    name: &str,
    seed: u64,
    phase: PhaseConfig,
) -> Result<Box<dyn Arsonist>, UnknownStrategy> {
    match name {
        "phase" => Ok(Box::new(PhaseArsonist::new(phase))),
        "greedy" => Ok(Box::new(GreedyArsonist::new())),
        "random" => Ok(Box::new(RandomArsonist::new(seed))),
        _ => Err(UnknownStrategy {
            role: "arsonist",
            name: name.to_string(),
        }),
    }
}

/// Extends a single path at its newest end.
#[derive(Debug, Clone, Default)]
pub struct PathBuilder {
    endpoint: Option<VertexId>,
}

impl PathBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn endpoint(&self) -> Option<VertexId> {
        self.endpoint
    }
}

impl Builder for PathBuilder {
    fn name(&self) -> &str {
        "path"
    }

    fn next_move(&mut self, view: &GameView<'_>, count: usize) -> BuilderMove {
        let base = view.graph.vertex_count() as VertexId;
        let mut edges = Vec::with_capacity(count);
        let mut end = self.endpoint.or(base.checked_sub(1));
        for v in base..base + count as VertexId {
            if let Some(p) = end {
                edges.push((p, v));
            }
            end = Some(v);
        }
        self.endpoint = end;
        BuilderMove { count, edges }
    }
}

/// Hangs every new vertex off vertex 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct StarBuilder;

impl Builder for StarBuilder {
    fn name(&self) -> &str {
        "star"
    }

    fn next_move(&mut self, view: &GameView<'_>, count: usize) -> BuilderMove {
        let base = view.graph.vertex_count() as VertexId;
        let edges = (base..base + count as VertexId).filter(|&v| v != 0).map(|v| (0, v)).collect();
        BuilderMove { count, edges }
    }
}

/// Uniform random recursive tree: each new vertex picks a uniformly random
/// parent among all vertices that exist before it.
#[derive(Debug, Clone)]
pub struct RandomRecursiveBuilder {
    rng: ChaCha8Rng,
}

impl RandomRecursiveBuilder {
    pub fn new(seed: u64) -> Self {
        RandomRecursiveBuilder {
            rng: strategy_rng(seed, BUILDER_STREAM),
        }
    }
}

impl Builder for RandomRecursiveBuilder {
    fn name(&self) -> &str {
        "rrt"
    }

    fn next_move(&mut self, view: &GameView<'_>, count: usize) -> BuilderMove {
        let base = view.graph.vertex_count() as VertexId;
        let edges = (base..base + count as VertexId)
            .filter(|&v| v != 0)
            .map(|v| (self.rng.gen_range(0..v), v))
            .collect();
        BuilderMove { count, edges }
    }
}

/// Lowest unburned id. Burned vertices never recover and new ids only grow,
/// so the answer is nondecreasing and a forward-only cursor suffices.
#[derive(Debug, Clone, Copy, Default)]
pub struct LowestUnburned {
    cursor: VertexId,
}

impl LowestUnburned {
    pub fn find(&mut self, view: &GameView<'_>, limit: usize) -> Option<VertexId> {
        self.find_excluding(view, limit, None)
    }

    fn find_excluding(&mut self, view: &GameView<'_>, limit: usize, skip: Option<VertexId>) -> Option<VertexId> {
        while (self.cursor as usize) < limit && view.burn.is_burning(self.cursor) {
            self.cursor += 1;
        }
        let mut v = self.cursor;
        while (v as usize) < limit && (view.burn.is_burning(v) || Some(v) == skip) {
            v += 1;
        }
        ((v as usize) < limit).then_some(v)
    }
}

/// Always ignites the lowest-id unburned vertex.
#[derive(Debug, Clone, Copy, Default)]
pub struct LowestUnburnedArsonist;

impl Arsonist for LowestUnburnedArsonist {
    fn name(&self) -> &str {
        "lowest"
    }

    fn choose(&mut self, view: &GameView<'_>) -> Option<VertexId> {
        (0..view.graph.vertex_count() as VertexId).find(|&v| !view.burn.is_burning(v))
    }
}

/// Uniformly random unburned vertex.
#[derive(Debug, Clone)]
pub struct RandomArsonist {
    rng: ChaCha8Rng,
}

impl RandomArsonist {
    pub fn new(seed: u64) -> Self {
        RandomArsonist {
            rng: strategy_rng(seed, ARSONIST_STREAM),
        }
    }
}

impl Arsonist for RandomArsonist {
    fn name(&self) -> &str {
        "random"
    }

    fn choose(&mut self, view: &GameView<'_>) -> Option<VertexId> {
        let n = view.graph.vertex_count() as VertexId;
        let unburned = view.burn.unburned_count();
        if unburned == 0 {
            return None;
        }
        for _ in 0..256 {
            let v = self.rng.gen_range(0..n);
            if !view.burn.is_burning(v) {
                return Some(v);
            }
        }
        let k = self.rng.gen_range(0..unburned);
        (0..n).filter(|&v| !view.burn.is_burning(v)).nth(k)
    }
}

const INF: u32 = u32::MAX;

/// Ignites an unburned vertex farthest from the fire (lowest id on ties).
///
/// Instead of a multi-source BFS every turn, keeps eta[v], the turn at which
/// v would catch fire if nothing else were ignited. Spreads leave eta
/// unchanged; each turn only the previous ignition and the newly added
/// edges can lower it, and a decrease-only Dijkstra pass propagates that.
/// A max-heap over (eta, lowest id) with lazy deletion yields the answer.
#[derive(Debug, Clone, Default)]
pub struct GreedyArsonist {
    eta: Vec<u32>,
    heap: BinaryHeap<(u32, Reverse<VertexId>)>,
    pending: BinaryHeap<Reverse<(u32, VertexId)>>,
    last_turn: Option<u64>,
    last_choice: Option<VertexId>,
    seen_edges: usize,
    rebuilds: u64,
}

impl GreedyArsonist {
    pub fn new() -> Self {
        Self::default()
    }

    /// Full recomputations performed (first call, or after a skipped turn).
    pub fn rebuilds(&self) -> u64 {
        self.rebuilds
    }

    fn rebuild(&mut self, view: &GameView<'_>, now: u32) {
        self.rebuilds += 1;
        let g = view.graph;
        let n = g.vertex_count();
        self.eta.clear();
        self.eta.resize(n, INF);
        let mut queue: Vec<VertexId> = (0..n as VertexId).filter(|&v| view.burn.is_burning(v)).collect();
        for &v in &queue {
            self.eta[v as usize] = now;
        }
        let mut i = 0;
        while i < queue.len() {
            let v = queue[i];
            i += 1;
            let next = self.eta[v as usize] + 1;
            for u in g.neighbors(v) {
                if self.eta[u as usize] == INF {
                    self.eta[u as usize] = next;
                    queue.push(u);
                }
            }
        }
        self.heap = (0..n as VertexId)
            .filter(|&v| self.eta[v as usize] > now)
            .map(|v| (self.eta[v as usize], Reverse(v)))
            .collect();
        self.seen_edges = g.edge_count();
    }

    fn lower(&mut self, v: VertexId, value: u32) {
        if value < self.eta[v as usize] {
            self.eta[v as usize] = value;
            self.pending.push(Reverse((value, v)));
            self.heap.push((value, Reverse(v)));
        }
    }

    fn update(&mut self, view: &GameView<'_>, now: u32) {
        let g = view.graph;
        let old = self.eta.len();
        self.eta.resize(g.vertex_count(), INF);
        for v in old as VertexId..g.vertex_count() as VertexId {
            self.heap.push((INF, Reverse(v)));
        }
        let floor = now - 1;
        let via = |eta: u32| if eta == INF { INF } else { eta.max(floor) + 1 };
        if let Some(x) = self.last_choice {
            self.lower(x, floor);
        }
        for e in self.seen_edges..g.edge_count() {
            let (a, b) = g.edge(e as u32);
            let (ea, eb) = (self.eta[a as usize], self.eta[b as usize]);
            self.lower(b, via(ea));
            self.lower(a, via(eb));
        }
        self.seen_edges = g.edge_count();
        while let Some(Reverse((d, v))) = self.pending.pop() {
            if d != self.eta[v as usize] {
                continue;
            }
            let next = via(d);
            for u in g.neighbors(v) {
                self.lower(u, next);
            }
        }
    }

    fn top(&mut self, now: u32) -> Option<VertexId> {
        while let Some(&(key, Reverse(v))) = self.heap.peek() {
            if key > now && key == self.eta[v as usize] {
                return Some(v);
            }
            self.heap.pop();
        }
        None
    }
}

impl Arsonist for GreedyArsonist {
    fn name(&self) -> &str {
        "greedy"
    }

    fn choose(&mut self, view: &GameView<'_>) -> Option<VertexId> {
        let now = u32::try_from(view.turn).expect("turn fits in u32");
        if self.last_turn.is_some_and(|t| t + 1 == view.turn) && now > 0 {
            self.update(view, now);
        } else {
            self.rebuild(view, now);
        }
        let unburned = view.burn.unburned_count();
        if self.heap.len() > 2 * unburned + 1024 {
            let eta = &self.eta;
            self.heap.retain(|&(key, Reverse(v))| key > now && key == eta[v as usize]);
        }
        let choice = if unburned == 0 { None } else { self.top(now) };
        debug_assert_eq!(choice.is_none(), unburned == 0, "eta bookkeeping out of sync");
        self.last_turn = Some(view.turn);
        self.last_choice = choice;
        choice
    }
}

/// Reference farthest-vertex choice by a fresh multi-source BFS.
pub fn farthest_unburned(view: &GameView<'_>) -> Option<VertexId> {
    let g = view.graph;
    let n = g.vertex_count();
    let mut dist = vec![u32::MAX; n];
    let mut queue: Vec<VertexId> = (0..n as VertexId).filter(|&v| view.burn.is_burning(v)).collect();
    for &v in &queue {
        dist[v as usize] = 0;
    }
    let mut i = 0;
    while i < queue.len() {
        let v = queue[i];
        i += 1;
        for u in g.neighbors(v) {
            if dist[u as usize] == u32::MAX {
                dist[u as usize] = dist[v as usize] + 1;
                queue.push(u);
            }
        }
    }
    (0..n as VertexId)
        .filter(|&v| !view.burn.is_burning(v))
        .max_by_key(|&v| (dist[v as usize], Reverse(v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseConfig {
    /// Turns played with the lowest-unburned rule before the first phase.
    pub warmup: u64,
    /// Phases last at least this fraction of the ⌈√(2|V|)⌉ budget, even
    /// when the plan needs fewer rounds. 0 gives A_k = planned rounds.
    #[serde(default = "default_min_phase_fraction")]
    pub min_phase_fraction: f64,
    #[serde(skip, default)]
    pub plan: PlanOptions,
}

fn default_min_phase_fraction() -> f64 {
    0.5
}

impl Default for PhaseConfig {
    fn default() -> Self {
        PhaseConfig {
            warmup: 10,
            min_phase_fraction: default_min_phase_fraction(),
            plan: PlanOptions::default(),
        }
    }
}

/// One phase of [`PhaseArsonist`]: burn G_{start} within `rounds` turns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub index: usize,
    /// N_k: the snapshot turn.
    pub start: u64,
    /// A_k: the phase length.
    pub rounds: usize,
    /// Rounds of the planned schedule; at most `rounds`.
    pub planned_rounds: usize,
    /// N_{k+1} = N_k + A_k.
    pub end: u64,
    pub snapshot_vertices: usize,
    pub tier: PlannerTier,
    pub budget: usize,
    pub budget_exceeded: bool,
    /// Turns whose planned source was already burning.
    pub substitutions: usize,
    /// Whether every snapshot vertex was burning after the final turn of the
    /// phase; `None` until that turn has been played.
    pub completed: Option<bool>,
}

#[derive(Debug, Clone)]
struct ActivePhase {
    snapshot: GraphSnapshot,
    sources: Vec<VertexId>,
    in_snapshot: LowestUnburned,
}

/// Upper bounds on the distance from vertex 0, extended as vertices arrive.
/// Each new vertex takes one more than its best already-bounded neighbor,
/// which is a real path inside every prefix containing it.
#[derive(Debug, Clone, Default)]
struct RootDistances {
    bound: Vec<u32>,
    /// Largest bound over `bound`; `None` once some vertex has none.
    max: Option<u32>,
}

impl RootDistances {
    const UNKNOWN: u32 = u32::MAX;

    /// Bounds every vertex below `limit`; returns the prefix's largest.
    fn extend(&mut self, g: &GrowingGraph, limit: usize) -> Option<u32> {
        let start = self.bound.len();
        if start >= limit {
            return self.max;
        }
        if start == 0 {
            self.max = Some(0);
        }
        self.bound.resize(limit, Self::UNKNOWN);
        if start == 0 {
            self.bound[0] = 0;
        }
        // Vertices joining through later ids of the same batch need another pass.
        let mut changed = true;
        while changed {
            changed = false;
            for v in start.max(1)..limit {
                let mut best = self.bound[v];
                for u in g.neighbors(v as VertexId) {
                    let d = self.bound.get(u as usize).copied().unwrap_or(Self::UNKNOWN);
                    if d != Self::UNKNOWN && d + 1 < best {
                        best = d + 1;
                    }
                }
                if best < self.bound[v] {
                    self.bound[v] = best;
                    changed = true;
                }
            }
        }
        let batch_max = self.bound[start..].iter().copied().max().unwrap_or(0);
        self.max = match self.max {
            Some(m) if batch_max != Self::UNKNOWN => Some(m.max(batch_max)),
            _ => None,
        };
        self.max
    }
}

/// The phase strategy: snapshot the graph, burn that snapshot completely on
/// a planned schedule while Builder keeps growing it, repeat.
#[derive(Debug, Clone)]
pub struct PhaseArsonist {
    config: PhaseConfig,
    active: Option<ActivePhase>,
    phases: Vec<PhaseRecord>,
    overall: LowestUnburned,
    root_distances: RootDistances,
}

impl PhaseArsonist {
    pub fn new(config: PhaseConfig) -> Self {
        assert!(config.warmup >= 1, "warmup must be at least one turn");
        assert!(
            (0.0..=1.0).contains(&config.min_phase_fraction),
            "min_phase_fraction must lie in [0, 1]"
        );
        PhaseArsonist {
            config,
            active: None,
            phases: Vec::new(),
            overall: LowestUnburned::default(),
            root_distances: RootDistances::default(),
        }
    }

    pub fn config(&self) -> &PhaseConfig {
        &self.config
    }

    fn start_phase(&mut self, view: &GameView<'_>) {
        let start = view.turn - 1;
        let snapshot = view.graph.snapshot(start);
        let opts = PlanOptions {
            floor_fraction: self.config.min_phase_fraction,
            ..self.config.plan
        };
        let bound = self.root_distances.extend(view.graph, snapshot.vertex_count);
        let plan = plan_burn_hinted(&view.graph.prefix(snapshot), &opts, bound);
        let planned_rounds = plan.schedule.rounds;
        let floor = (self.config.min_phase_fraction * plan.budget as f64).ceil() as usize;
        let rounds = planned_rounds.max(floor.min(plan.budget));
        self.phases.push(PhaseRecord {
            index: self.phases.len() + 1,
            start,
            rounds,
            planned_rounds,
            end: start + rounds as u64,
            snapshot_vertices: snapshot.vertex_count,
            tier: plan.tier,
            budget: plan.budget,
            budget_exceeded: plan.budget_exceeded,
            substitutions: 0,
            completed: None,
        });
        self.active = Some(ActivePhase {
            snapshot,
            sources: plan.schedule.sources,
            in_snapshot: LowestUnburned::default(),
        });
    }
}

impl Arsonist for PhaseArsonist {
    fn name(&self) -> &str {
        "phase"
    }

    fn choose(&mut self, view: &GameView<'_>) -> Option<VertexId> {
        let n = view.turn;
        let total = view.graph.vertex_count();
        if n <= self.config.warmup {
            return self.overall.find(view, total);
        }
        if self.phases.last().is_none_or(|p| n > p.end) {
            self.start_phase(view);
        }
        let record = self.phases.last_mut().expect("phase started");
        let active = self.active.as_mut().expect("phase started");
        let limit = active.snapshot.vertex_count;
        let planned = active.sources.get((n - record.start - 1) as usize).copied();
        let choice = match planned {
            Some(x) if !view.burn.is_burning(x) => Some(x),
            _ => {
                if planned.is_some() {
                    record.substitutions += 1;
                }
                active
                    .in_snapshot
                    .find(view, limit)
                    .or_else(|| self.overall.find(view, total))
            }
        };
        if n == record.end {
            let left = active.in_snapshot.find_excluding(view, limit, choice);
            record.completed = Some(left.is_none());
        }
        choice
    }

    fn phases(&self) -> &[PhaseRecord] {
        &self.phases
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{BurnState, Game};
    use crate::graph::GrowingGraph;
    use crate::schedule::GrowthSchedule;

    fn view<'a>(turn: u64, graph: &'a GrowingGraph, burn: &'a BurnState) -> GameView<'a> {
        GameView { turn, graph, burn }
    }

    #[test]
    fn path_builder_examples() {
        let mut g = GrowingGraph::new();
        g.add_generation(1, 5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let b = BurnState::new();
        let mut pb = PathBuilder::new();
        let mv = pb.next_move(&view(2, &g, &b), 3);
        assert_eq!(mv.edges, vec![(4, 5), (5, 6), (6, 7)]);
        assert_eq!(pb.endpoint(), Some(7));
        assert_eq!(pb.next_move(&view(3, &g, &b), 0), BuilderMove::empty());

        let empty = GrowingGraph::new();
        let mut pb = PathBuilder::new();
        let mv = pb.next_move(&view(1, &empty, &b), 2);
        assert_eq!((mv.count, mv.edges), (2, vec![(0, 1)]));
        assert_eq!(pb.endpoint(), Some(1));
    }

    #[test]
    fn star_builder_examples() {
        let empty = GrowingGraph::new();
        let b = BurnState::new();
        assert_eq!(StarBuilder.next_move(&view(1, &empty, &b), 1), BuilderMove { count: 1, edges: vec![] });
        let mut g = GrowingGraph::new();
        g.add_generation(1, 1, &[]).unwrap();
        assert_eq!(StarBuilder.next_move(&view(2, &g, &b), 3).edges, vec![(0, 1), (0, 2), (0, 3)]);
        assert_eq!(StarBuilder.next_move(&view(2, &g, &b), 0), BuilderMove::empty());
    }

    #[test]
    fn root_distance_bounds_hold_in_every_prefix() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut g = GrowingGraph::new();
        let mut dist = RootDistances::default();
        for turn in 1..=60u64 {
            let base = g.vertex_count() as VertexId;
            let count = rng.gen_range(1..5u32);
            let mut edges = Vec::new();
            // Chain the batch backwards so some vertices only reach the old
            // graph through higher ids.
            for v in base..base + count {
                if v + 1 < base + count {
                    edges.push((v, v + 1));
                } else if base > 0 {
                    edges.push((rng.gen_range(0..base), v));
                }
            }
            if base > 2 && count > 1 && rng.gen_bool(0.5) {
                edges.push((rng.gen_range(0..base), base));
            }
            g.add_generation(turn, count as usize, &edges).unwrap();
            let bound = dist.extend(&g, g.vertex_count()).unwrap();
            let exact = crate::graph::bfs_distances(&g, 0, None).unwrap();
            assert!(exact.max_distance().unwrap() <= bound);
            for v in 0..g.vertex_count() as VertexId {
                assert!(exact.get(v).unwrap() <= dist.bound[v as usize]);
            }
        }
    }

    #[test]
    fn rrt_first_vertex_is_root() {
        let empty = GrowingGraph::new();
        let b = BurnState::new();
        let mv = RandomRecursiveBuilder::new(3).next_move(&view(1, &empty, &b), 1);
        assert_eq!(mv, BuilderMove { count: 1, edges: vec![] });
    }

    fn burned_path(n: u32, burning: &[u32]) -> (GrowingGraph, BurnState) {
        let mut g = GrowingGraph::new();
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        g.add_generation(1, n as usize, &edges).unwrap();
        let mut b = BurnState::new();
        b.sync(&g);
        for &v in burning {
            b.ignite(v).unwrap();
        }
        (g, b)
    }

    #[test]
    fn greedy_examples() {
        let (g, b) = burned_path(10, &[0, 1]);
        assert_eq!(GreedyArsonist::new().choose(&view(5, &g, &b)), Some(9));
        let (g, b) = burned_path(3, &[0, 1, 2]);
        assert_eq!(GreedyArsonist::new().choose(&view(5, &g, &b)), None);
        // 0..=8 with 4 burning: 0 and 8 are both at distance 4.
        let (g, b) = burned_path(9, &[4]);
        assert_eq!(GreedyArsonist::new().choose(&view(5, &g, &b)), Some(0));
    }

    #[test]
    fn random_arsonist_examples() {
        let (g, b) = burned_path(3, &[0, 2]);
        assert_eq!(RandomArsonist::new(1).choose(&view(2, &g, &b)), Some(1));
        let (g, b) = burned_path(2, &[0, 1]);
        assert_eq!(RandomArsonist::new(1).choose(&view(2, &g, &b)), None);
    }

    #[test]
    fn factories() {
        for name in BUILDER_NAMES {
            assert_eq!(builder_by_name(name, 0).unwrap().name(), *name);
        }
        for name in ARSONIST_NAMES {
            assert_eq!(arsonist_by_name(name, 0).unwrap().name(), *name);
        }
        assert!(builder_by_name("human", 0).is_err());
        assert!(arsonist_by_name("fastest", 0).is_err());
    }

    #[test]
    fn phase_warmup_uses_lowest_unburned() {
        let mut game = Game::new(
            GrowthSchedule::constant(3).unwrap(),
            Some(Box::new(StarBuilder)),
            Some(Box::new(PhaseArsonist::new(PhaseConfig { warmup: 3, ..PhaseConfig::default() }))),
            0,
        );
        game.run(3).unwrap();
        // Turn 1: nothing burns yet, so 0. From then on the burning hub
        // reaches every vertex in the same turn it appears.
        let sources: Vec<_> = game.burn().sources().iter().map(|s| s.1).collect();
        assert_eq!(sources, vec![Some(0), None, None]);

        let mut game = Game::new(
            GrowthSchedule::constant(2).unwrap(),
            Some(Box::new(PathBuilder::new())),
            Some(Box::new(PhaseArsonist::new(PhaseConfig { warmup: 3, ..PhaseConfig::default() }))),
            0,
        );
        game.run(3).unwrap();
        // Path 0-1: ignite 0. Turn 2 adds 2-3: 1 catches, lowest unburned 2.
        // Turn 3 adds 4-5: 3 catches, lowest unburned 4.
        let sources: Vec<_> = game.burn().sources().iter().map(|s| s.1).collect();
        assert_eq!(sources, vec![Some(0), Some(2), Some(4)]);
    }

    #[test]
    fn phase_unit_growth_burns_everything() {
        let mut game = Game::new(
            GrowthSchedule::constant(1).unwrap(),
            Some(Box::new(PathBuilder::new())),
            Some(Box::new(PhaseArsonist::new(PhaseConfig { warmup: 1, ..PhaseConfig::default() }))),
            0,
        );
        for r in game.run(50).unwrap().records() {
            assert_eq!(r.burning, r.vertices);
        }
        let phases = game.arsonist().unwrap().phases();
        assert_eq!((phases[0].start, phases[0].snapshot_vertices, phases[0].rounds), (1, 1, 1));
        assert!(phases.iter().all(|p| p.completed != Some(false)));
    }
}
