//! Nested spanning trees of a legal construction, and the burning comparison
//! between the tree sequence and the original graphs.
//!
//! Each new vertex keeps exactly one edge back into the already-spanned part
//! of the graph, so the kept edges after every turn form a spanning tree of
//! that turn's graph, and each tree contains the previous one. Burning the
//! same source sequence on the trees can never get ahead of the graphs.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::BurnState;
use crate::graph::{EdgeId, GrowingGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("turn {turn}: vertex {vertex} is not connected to the rest of the graph")]
    PrefixDisconnected { turn: u64, vertex: VertexId },
    #[error("turn {turn}: tree has {tree} burning vertices, graph only {graph}")]
    DominanceViolated { turn: u64, tree: usize, graph: usize },
    #[error("turn {turn}: source {vertex} is missing or already burning")]
    InvalidSource { turn: u64, vertex: VertexId },
}

const NO_EDGE: EdgeId = EdgeId::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSequence {
    kept: Vec<bool>,
    // The edge each vertex was attached by (NO_EDGE for the root).
    attaching: Vec<EdgeId>,
}

impl TreeSequence {
    pub fn is_kept(&self, e: EdgeId) -> bool {
        self.kept.get(e as usize).copied().unwrap_or(false)
    }

    pub fn kept_edges(&self) -> Vec<EdgeId> {
        (0..self.kept.len() as EdgeId).filter(|&e| self.kept[e as usize]).collect()
    }

    pub fn attaching_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.attaching.get(v as usize).copied().filter(|&e| e != NO_EDGE)
    }

    /// Kept edges among the first `edges` edge ids.
    pub fn kept_prefix(&self, edges: usize) -> usize {
        self.kept[..edges.min(self.kept.len())].iter().filter(|&&k| k).count()
    }

    /// The tree construction itself, with the same generations as `g`.
    pub fn tree_graph(&self, g: &GrowingGraph) -> GrowingGraph {
        let mut t = GrowingGraph::new();
        for i in 0..g.generation_count() {
            let gen = g.generation(i).expect("index in range");
            let edges: Vec<_> = gen.edges.filter(|&e| self.is_kept(e)).map(|e| g.edge(e)).collect();
            t.add_generation(gen.turn, gen.vertices.len(), &edges)
                .expect("kept edges come from a valid generation");
        }
        t
    }
}

/// Picks one attaching edge per new vertex, turn by turn. New vertices are
/// layered by BFS from the already-spanned set over that turn's edges, and
/// each keeps its lowest-id edge to the spanned set or an earlier layer.
pub fn incremental_spanning_tree(g: &GrowingGraph) -> Result<TreeSequence, TreeError> {
    let mut kept = vec![false; g.edge_count()];
    let mut attaching = vec![NO_EDGE; g.vertex_count()];
    for i in 0..g.generation_count() {
        let gen = g.generation(i).expect("index in range");
        let (first, end) = (gen.vertices.start, gen.vertices.end);
        if first == end {
            continue;
        }
        let edge_end = gen.edges.end;
        let local = |v: VertexId| (v - first) as usize;
        let mut layer = vec![u32::MAX; (end - first) as usize];
        let mut queue = Vec::new();
        if first == 0 {
            layer[0] = 0;
            queue.push(first);
        } else {
            for v in first..end {
                if g.incident(v).any(|(e, u)| e < edge_end && u < first) {
                    layer[local(v)] = 1;
                    queue.push(v);
                }
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            let next = layer[local(v)] + 1;
            for (e, u) in g.incident(v) {
                if e < edge_end && u >= first && layer[local(u)] == u32::MAX {
                    layer[local(u)] = next;
                    queue.push(u);
                }
            }
        }
        for v in first..end {
            let lv = layer[local(v)];
            if lv == u32::MAX {
                return Err(TreeError::PrefixDisconnected { turn: gen.turn, vertex: v });
            }
            if lv == 0 {
                continue;
            }
            let best = g
                .incident(v)
                .filter(|&(e, u)| e < edge_end && (u < first || layer[local(u)] < lv))
                .map(|(e, _)| e)
                .min()
                .expect("a layered vertex has an edge to the previous layer");
            kept[best as usize] = true;
            attaching[v as usize] = best;
        }
    }
    Ok(TreeSequence { kept, attaching })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominancePair {
    pub turn: u64,
    pub tree_vertices: usize,
    pub graph_vertices: usize,
    pub tree_burning: usize,
    pub graph_burning: usize,
}

/// Replays the first `turns` generations of `g` and of its tree sequence
/// side by side, igniting `sources[i]` after turn i + 1 on both.
pub fn dominance_check(
    g: &GrowingGraph,
    tree: &TreeSequence,
    sources: &[Option<VertexId>],
    turns: usize,
) -> Result<Vec<DominancePair>, TreeError> {
    let mut gg = GrowingGraph::new();
    let mut tt = GrowingGraph::new();
    let mut bg = BurnState::new();
    let mut bt = BurnState::new();
    let mut out = Vec::new();
    for i in 0..turns.min(g.generation_count()) {
        let gen = g.generation(i).expect("index in range");
        let turn = gen.turn;
        let all: Vec<_> = gen.edges.clone().map(|e| g.edge(e)).collect();
        let kept: Vec<_> = gen.edges.filter(|&e| tree.is_kept(e)).map(|e| g.edge(e)).collect();
        let count = gen.vertices.len();
        gg.add_generation(turn, count, &all).expect("replaying a valid graph");
        tt.add_generation(turn, count, &kept).expect("replaying a valid tree");
        bg.spread(&gg);
        bt.spread(&tt);
        if let Some(v) = sources.get(i).copied().flatten() {
            bg.ignite(v)
                .map_err(|_| TreeError::InvalidSource { turn, vertex: v })?;
            // Cannot already burn in the tree (it burns a subset of the
            // graph's vertices); kept as a guard.
            if !bt.is_burning(v) {
                bt.ignite(v).expect("vertex exists in the tree");
            }
        }
        let pair = DominancePair {
            turn,
            tree_vertices: tt.vertex_count(),
            graph_vertices: gg.vertex_count(),
            tree_burning: bt.burning_count(),
            graph_burning: bg.burning_count(),
        };
        if pair.tree_burning > pair.graph_burning {
            return Err(TreeError::DominanceViolated {
                turn,
                tree: pair.tree_burning,
                graph: pair.graph_burning,
            });
        }
        out.push(pair);
    }
    Ok(out)
}

/// A random legal construction: each turn adds 0..=`max_new` vertices (at
/// least one on turn 1), each joined to a random earlier vertex, plus extra
/// edges from new vertices with probability `extra` each. Edge order within
/// a turn is shuffled.
pub fn random_construction<R: Rng>(rng: &mut R, turns: u64, max_new: usize, extra: f64) -> GrowingGraph {
    let mut g = GrowingGraph::new();
    for turn in 1..=turns {
        let base = g.vertex_count() as VertexId;
        let lo = usize::from(base == 0);
        let count = rng.gen_range(lo..=max_new.max(lo));
        let mut edges = Vec::new();
        for v in base..base + count as VertexId {
            if v == 0 {
                continue;
            }
            let parent = rng.gen_range(0..v);
            edges.push((parent, v));
            while rng.gen_bool(extra) {
                let other = rng.gen_range(0..v);
                if !edges.iter().any(|&(a, b)| (a, b) == (other, v)) {
                    edges.push((other, v));
                }
            }
        }
        edges.shuffle(rng);
        for e in &mut edges {
            if rng.gen_bool(0.5) {
                *e = (e.1, e.0);
            }
        }
        g.add_generation(turn, count, &edges).expect("construction is legal");
    }
    g
}

/// A valid source sequence for `g`: after each turn's spread, a uniformly
/// random unburned vertex, or `None` once everything burns.
pub fn random_sources<R: Rng>(rng: &mut R, g: &GrowingGraph) -> Vec<Option<VertexId>> {
    let mut replay = GrowingGraph::new();
    let mut burn = BurnState::new();
    let mut out = Vec::with_capacity(g.generation_count());
    for i in 0..g.generation_count() {
        let gen = g.generation(i).expect("index in range");
        let edges: Vec<_> = gen.edges.map(|e| g.edge(e)).collect();
        replay
            .add_generation(gen.turn, gen.vertices.len(), &edges)
            .expect("replaying a valid graph");
        burn.spread(&replay);
        let unburned: Vec<_> = (0..replay.vertex_count() as VertexId)
            .filter(|&v| !burn.is_burning(v))
            .collect();
        let pick = unburned.choose(rng).copied();
        if let Some(v) = pick {
            burn.ignite(v).expect("picked an unburned vertex");
        }
        out.push(pick);
    }
    out
}
