//! Append-only growing graph.
//!
//! Vertices receive dense ids in arrival order and are never removed. Every
//! call to [`GrowingGraph::add_generation`] appends one generation: a batch of
//! new vertices plus edges that each touch at least one of them, so the graph
//! as it stood after any earlier turn is exactly the prefix of vertices whose
//! generation is at most that turn.
//!
//! Adjacency is kept in flat arrays (a linked list of half-edges per vertex),
//! which keeps the per-vertex overhead at four bytes and lets neighbor lists of
//! old vertices grow without reallocating per-vertex storage.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Range;

use thiserror::Error;

pub type VertexId = u32;
pub type EdgeId = u32;

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) joins two pre-existing vertices")]
    EdgeBetweenOldVertices(VertexId, VertexId),
    #[error("edge ({0}, {1}) appears more than once")]
    DuplicateEdge(VertexId, VertexId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge ({0}, {1}) names a vertex that does not exist")]
    UnknownEndpoint(VertexId, VertexId),
    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),
    #[error("turn {got} does not follow turn {last}")]
    TurnNotIncreasing { last: u64, got: u64 },
    #[error("vertex capacity exceeded")]
    CapacityExceeded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Generation {
    turn: u64,
    first_vertex: u32,
    first_edge: u32,
}

/// A logical view of a [`GrowingGraph`] as it stood after `turn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GraphSnapshot {
    pub turn: u64,
    pub vertex_count: usize,
}

/// Read access to an undirected graph on the vertex set `0..vertex_count()`.
pub trait Topology {
    fn vertex_count(&self) -> usize;

    fn for_each_neighbor<F: FnMut(VertexId)>(&self, v: VertexId, f: F);

    fn neighbor_list(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        self.for_each_neighbor(v, |u| out.push(u));
        out
    }
}

#[derive(Clone, Default)]
pub struct GrowingGraph {
    head: Vec<u32>,
    // Half-edge `2e` points from the first endpoint to the second, `2e + 1`
    // the other way round. Each is (target, next half-edge at the source).
    halves: Vec<(VertexId, u32)>,
    generations: Vec<Generation>,
}

impl fmt::Debug for GrowingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GrowingGraph")
            .field("vertices", &self.vertex_count())
            .field("edges", &self.edge_count())
            .field("generations", &self.generations.len())
            .finish()
    }
}

impl GrowingGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex_count(&self) -> usize {
        self.head.len()
    }

    pub fn edge_count(&self) -> usize {
        self.halves.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_empty()
    }

    /// Turn tag of the most recent generation, or 0 for a fresh graph.
    pub fn last_turn(&self) -> u64 {
        self.generations.last().map_or(0, |g| g.turn)
    }

    pub fn generation_count(&self) -> usize {
        self.generations.len()
    }

    /// Checks a prospective generation without mutating the graph.
    pub fn check_generation(
        &self,
        count: usize,
        edges: &[(VertexId, VertexId)],
    ) -> Result<(), GraphError> {
        let base = self.vertex_count() as u64;
        let end = base + count as u64;
        if end > u64::from(NIL) {
            return Err(GraphError::CapacityExceeded);
        }
        let mut keys = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if u64::from(a) >= end || u64::from(b) >= end {
                return Err(GraphError::UnknownEndpoint(a, b));
            }
            if u64::from(a) < base && u64::from(b) < base {
                return Err(GraphError::EdgeBetweenOldVertices(a, b));
            }
            keys.push((a.min(b), a.max(b)));
        }
        // Every edge touches a new vertex, so duplicates can only occur
        // within this batch.
        keys.sort_unstable();
        if let Some(w) = keys.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(())
    }

    /// Appends `count` vertices tagged with `turn` together with `edges`.
    ///
    /// New vertices take the next `count` dense ids, which callers use when
    /// naming them in `edges`.
    pub fn add_generation(
        &mut self,
        turn: u64,
        count: usize,
        edges: &[(VertexId, VertexId)],
    ) -> Result<Range<VertexId>, GraphError> {
        if let Some(last) = self.generations.last() {
            if turn <= last.turn {
                return Err(GraphError::TurnNotIncreasing {
                    last: last.turn,
                    got: turn,
                });
            }
        }
        self.check_generation(count, edges)?;
        Ok(self.push_generation_unchecked(turn, count, edges))
    }

    fn push_generation_unchecked(
        &mut self,
        turn: u64,
        count: usize,
        edges: &[(VertexId, VertexId)],
    ) -> Range<VertexId> {
        let first_vertex = self.vertex_count() as u32;
        self.generations.push(Generation {
            turn,
            first_vertex,
            first_edge: self.edge_count() as u32,
        });
        self.head.resize(self.head.len() + count, NIL);
        self.halves.reserve(2 * edges.len());
        for &(a, b) in edges {
            let h = self.halves.len() as u32;
            self.halves.push((b, self.head[a as usize]));
            self.head[a as usize] = h;
            self.halves.push((a, self.head[b as usize]));
            self.head[b as usize] = h + 1;
        }
        first_vertex..self.vertex_count() as u32
    }

    pub fn contains(&self, v: VertexId) -> bool {
        (v as usize) < self.vertex_count()
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        let h = 2 * e as usize;
        (self.halves[h + 1].0, self.halves[h].0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.edge_count() as EdgeId).map(move |e| self.edge(e))
    }

    /// Neighbors of `v`, most recently attached first.
    pub fn neighbors(&self, v: VertexId) -> Neighbors<'_> {
        Neighbors {
            graph: self,
            half: self.head[v as usize],
        }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).count()
    }

    pub fn generation_of(&self, v: VertexId) -> Option<u64> {
        if !self.contains(v) {
            return None;
        }
        let idx = self.generations.partition_point(|g| g.first_vertex <= v);
        Some(self.generations[idx - 1].turn)
    }

    pub fn edge_generation(&self, e: EdgeId) -> Option<u64> {
        if e as usize >= self.edge_count() {
            return None;
        }
        let idx = self.generations.partition_point(|g| g.first_edge <= e);
        Some(self.generations[idx - 1].turn)
    }

    /// Number of vertices whose generation is at most `turn`.
    pub fn vertices_through(&self, turn: u64) -> usize {
        let idx = self.generations.partition_point(|g| g.turn <= turn);
        match self.generations.get(idx) {
            Some(g) => g.first_vertex as usize,
            None => self.vertex_count(),
        }
    }

    /// Number of edges whose generation is at most `turn`.
    pub fn edges_through(&self, turn: u64) -> usize {
        let idx = self.generations.partition_point(|g| g.turn <= turn);
        match self.generations.get(idx) {
            Some(g) => g.first_edge as usize,
            None => self.edge_count(),
        }
    }

    pub fn snapshot(&self, turn: u64) -> GraphSnapshot {
        GraphSnapshot {
            turn,
            vertex_count: self.vertices_through(turn),
        }
    }

    pub fn prefix(&self, snapshot: GraphSnapshot) -> PrefixView<'_> {
        PrefixView {
            graph: self,
            vertices: snapshot.vertex_count.min(self.vertex_count()) as u32,
        }
    }

    /// Vertex and edge ranges of the `index`-th generation, in insertion order.
    pub fn generation(&self, index: usize) -> Option<GenerationView> {
        let g = self.generations.get(index)?;
        let next = self.generations.get(index + 1);
        Some(GenerationView {
            turn: g.turn,
            vertices: g.first_vertex..next.map_or(self.vertex_count() as u32, |n| n.first_vertex),
            edges: g.first_edge..next.map_or(self.edge_count() as u32, |n| n.first_edge),
        })
    }

    /// Rebuilds the graph from its first `generations` generations.
    pub fn replay_prefix(&self, generations: usize) -> GrowingGraph {
        let mut out = GrowingGraph::new();
        for i in 0..generations.min(self.generations.len()) {
            let gen = self.generation(i).expect("index in range");
            let edges: Vec<_> = gen.edges.clone().map(|e| self.edge(e)).collect();
            out.push_generation_unchecked(gen.turn, gen.vertices.len(), &edges);
        }
        out
    }

    /// Parses the `n m` / `u v` edge-list format into a single generation.
    pub fn from_edge_list(text: &str) -> Result<GrowingGraph, EdgeListError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(EdgeListError::MissingHeader)?;
        let (n, m) = parse_pair(line, header)?;
        let mut edges = Vec::with_capacity(m as usize);
        for (line, text) in lines.by_ref().take(m as usize) {
            let (u, v) = parse_pair(line, text)?;
            if u >= n || v >= n {
                return Err(EdgeListError::Graph {
                    line,
                    source: GraphError::UnknownEndpoint(u as VertexId, v as VertexId),
                });
            }
            edges.push((u as VertexId, v as VertexId));
        }
        if edges.len() != m as usize {
            return Err(EdgeListError::EdgeCount {
                expected: m as usize,
                found: edges.len(),
            });
        }
        let mut g = GrowingGraph::new();
        g.add_generation(1, n as usize, &edges)
            .map_err(|source| EdgeListError::Graph { line: 0, source })?;
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(u64, u64), EdgeListError> {
    let mut it = text.split_whitespace();
    let parse = |s: Option<&str>| -> Result<u64, EdgeListError> {
        s.and_then(|s| s.parse().ok())
            .ok_or_else(|| EdgeListError::Syntax {
                line,
                text: text.to_string(),
            })
    };
    let a = parse(it.next())?;
    let b = parse(it.next())?;
    if it.next().is_some() {
        return Err(EdgeListError::Syntax {
            line,
            text: text.to_string(),
        });
    }
    Ok((a, b))
}

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("edge list is empty")]
    MissingHeader,
    #[error("line {line}: expected two non-negative integers, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("header announces {expected} edges but {found} were listed")]
    EdgeCount { expected: usize, found: usize },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationView {
    pub turn: u64,
    pub vertices: Range<VertexId>,
    pub edges: Range<EdgeId>,
}

pub struct Neighbors<'a> {
    graph: &'a GrowingGraph,
    half: u32,
}

impl Iterator for Neighbors<'_> {
    type Item = VertexId;

    fn next(&mut self) -> Option<VertexId> {
        if self.half == NIL {
            return None;
        }
        let h = self.half as usize;
        let (to, next) = self.graph.halves[h];
        self.half = next;
        Some(to)
    }
}

impl GrowingGraph {
    /// Incident edges of `v` as `(edge id, other endpoint)`.
    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = (EdgeId, VertexId)> + '_ {
        let mut half = self.head[v as usize];
        std::iter::from_fn(move || {
            if half == NIL {
                return None;
            }
            let h = half as usize;
            let (to, next) = self.halves[h];
            half = next;
            Some(((h / 2) as EdgeId, to))
        })
    }
}

impl Topology for GrowingGraph {
    fn vertex_count(&self) -> usize {
        self.head.len()
    }

    fn for_each_neighbor<F: FnMut(VertexId)>(&self, v: VertexId, f: F) {
        self.neighbors(v).for_each(f);
    }
}

/// The subgraph induced by the first `vertices` ids of a growing graph.
#[derive(Debug, Clone, Copy)]
pub struct PrefixView<'a> {
    graph: &'a GrowingGraph,
    vertices: u32,
}

impl PrefixView<'_> {
    pub fn graph(&self) -> &GrowingGraph {
        self.graph
    }
}

impl Topology for PrefixView<'_> {
    fn vertex_count(&self) -> usize {
        self.vertices as usize
    }

    fn for_each_neighbor<F: FnMut(VertexId)>(&self, v: VertexId, mut f: F) {
        let limit = self.vertices;
        for u in self.graph.neighbors(v) {
            if u < limit {
                f(u);
            }
        }
    }
}

/// A small adjacency-list graph, handy for tests and for relabelled copies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdjacencyGraph {
    adj: Vec<Vec<VertexId>>,
}

impl AdjacencyGraph {
    pub fn new(n: usize) -> Self {
        AdjacencyGraph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Self {
        let mut g = AdjacencyGraph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId) {
        self.adj[a as usize].push(b);
        self.adj[b as usize].push(a);
    }

    pub fn from_topology<T: Topology>(t: &T) -> Self {
        let mut g = AdjacencyGraph::new(t.vertex_count());
        for v in 0..t.vertex_count() as VertexId {
            t.for_each_neighbor(v, |u| g.adj[v as usize].push(u));
        }
        g
    }
}

impl Topology for AdjacencyGraph {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn for_each_neighbor<F: FnMut(VertexId)>(&self, v: VertexId, f: F) {
        self.adj[v as usize].iter().copied().for_each(f);
    }
}

/// Unweighted BFS distances from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distances {
    dist: Vec<u32>,
    order: Vec<VertexId>,
}

impl Distances {
    pub fn get(&self, v: VertexId) -> Option<u32> {
        match self.dist.get(v as usize) {
            Some(&d) if d != u32::MAX => Some(d),
            _ => None,
        }
    }

    /// Reached vertices in BFS order (nondecreasing distance).
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, u32)> + '_ {
        self.order.iter().map(move |&v| (v, self.dist[v as usize]))
    }

    pub fn max_distance(&self) -> Option<u32> {
        self.order.last().map(|&v| self.dist[v as usize])
    }
}

pub fn bfs_distances<T: Topology>(
    graph: &T,
    source: VertexId,
    cap: Option<u32>,
) -> Result<Distances, GraphError> {
    let n = graph.vertex_count();
    if source as usize >= n {
        return Err(GraphError::UnknownVertex(source));
    }
    let cap = cap.unwrap_or(u32::MAX - 1);
    let mut dist = vec![u32::MAX; n];
    let mut order = vec![source];
    dist[source as usize] = 0;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        let d = dist[v as usize];
        if d >= cap {
            continue;
        }
        graph.for_each_neighbor(v, |u| {
            if dist[u as usize] == u32::MAX {
                dist[u as usize] = d + 1;
                order.push(u);
            }
        });
    }
    Ok(Distances { dist, order })
}

/// True iff every vertex is reachable from vertex 0; vacuously true when empty.
pub fn is_connected<T: Topology>(graph: &T) -> bool {
    let n = graph.vertex_count();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0 as VertexId]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        graph.for_each_neighbor(v, |u| {
            if !seen[u as usize] {
                seen[u as usize] = true;
                reached += 1;
                queue.push_back(u);
            }
        });
    }
    reached == n
}
