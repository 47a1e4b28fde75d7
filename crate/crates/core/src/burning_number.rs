//! Burning schedules and the burning number.
//!
//! A schedule x₁, …, x_k burns G in k rounds iff the balls B(x_i, k − i)
//! cover every vertex; all solvers here work with that covering form. In a
//! [`BurnSchedule`] the source at index i (0-based) has radius
//! `rounds - 1 - i`, and a schedule may stop early once everything is
//! covered.

use std::collections::HashSet;

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{bfs_distances, is_connected, Topology, VertexId};

pub const DEFAULT_EXACT_CAP: usize = 64;
/// Bitmask width of the exact solver.
pub const MAX_EXACT_CAP: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BurnSchedule {
    pub sources: Vec<VertexId>,
    pub rounds: usize,
}

impl BurnSchedule {
    pub fn radius(&self, index: usize) -> usize {
        self.rounds - 1 - index
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BurningError {
    #[error("graph has {vertices} vertices, exact solver cap is {cap}")]
    GraphTooLarge { vertices: usize, cap: usize },
    #[error("graph is disconnected")]
    GraphDisconnected,
    #[error("graph is empty")]
    EmptyGraph,
    #[error("search stopped after {nodes} nodes")]
    SearchLimit { nodes: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("budget too small: {uncovered} vertices left uncovered")]
pub struct Infeasible {
    pub uncovered: usize,
}

pub fn ceil_sqrt(x: u64) -> u64 {
    let r = x.isqrt();
    if r * r >= x {
        r
    } else {
        r + 1
    }
}

/// ⌈√(2n)⌉: enough rounds to burn any connected graph on n vertices.
pub fn sqrt_2n_budget(n: u64) -> u64 {
    ceil_sqrt(2 * n)
}

/// Optimal schedule for the path 0–1–…–(n−1): balls of radius k−1, k−2, …
/// tile the path from vertex 0.
pub fn path_schedule(n: usize) -> BurnSchedule {
    assert!(n >= 1, "path_schedule needs at least one vertex");
    let k = ceil_sqrt(n as u64) as usize;
    let mut sources = Vec::new();
    let mut next_uncovered = 0;
    for i in 0..k {
        if next_uncovered >= n {
            break;
        }
        let r = k - 1 - i;
        let center = (next_uncovered + r).min(n - 1);
        sources.push(center as VertexId);
        next_uncovered = center + r + 1;
    }
    BurnSchedule { sources, rounds: k }
}

/// Reusable scratch space for bounded BFS.
#[derive(Debug, Default)]
pub struct BallScratch {
    stamp: Vec<u32>,
    current: u32,
    queue: Vec<(VertexId, u32)>,
}

impl BallScratch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Calls `f` on every vertex within distance `r` of `center`.
    pub fn ball<T: Topology, F: FnMut(VertexId)>(&mut self, g: &T, center: VertexId, r: u32, mut f: F) {
        let n = g.vertex_count();
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
        }
        self.current = self.current.wrapping_add(1);
        if self.current == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.current = 1;
        }
        let mark = self.current;
        self.queue.clear();
        self.queue.push((center, 0));
        self.stamp[center as usize] = mark;
        let mut i = 0;
        while i < self.queue.len() {
            let (v, d) = self.queue[i];
            i += 1;
            f(v);
            if d == r {
                continue;
            }
            let (stamp, queue) = (&mut self.stamp, &mut self.queue);
            g.for_each_neighbor(v, |u| {
                if stamp[u as usize] != mark {
                    stamp[u as usize] = mark;
                    queue.push((u, d + 1));
                }
            });
        }
    }
}

/// Covering check: sources distinct and the balls cover every vertex.
pub fn verify_schedule<T: Topology>(g: &T, schedule: &BurnSchedule) -> bool {
    let n = g.vertex_count();
    if schedule.sources.len() > schedule.rounds {
        return false;
    }
    let distinct: HashSet<_> = schedule.sources.iter().collect();
    if distinct.len() != schedule.sources.len() || schedule.sources.iter().any(|&s| s as usize >= n) {
        return false;
    }
    let mut covered = vec![false; n];
    let mut scratch = BallScratch::new();
    for (i, &s) in schedule.sources.iter().enumerate() {
        scratch.ball(g, s, schedule.radius(i) as u32, |v| covered[v as usize] = true);
    }
    covered.into_iter().all(|c| c)
}

/// Process check: spread, then ignite x_i, for `rounds` rounds; true iff
/// everything burns.
pub fn simulate_schedule<T: Topology>(g: &T, schedule: &BurnSchedule) -> bool {
    let n = g.vertex_count();
    let mut burning = vec![false; n];
    for round in 0..schedule.rounds {
        let mut next = burning.clone();
        for v in 0..n as VertexId {
            if burning[v as usize] {
                g.for_each_neighbor(v, |u| next[u as usize] = true);
            }
        }
        burning = next;
        if let Some(&x) = schedule.sources.get(round) {
            match burning.get_mut(x as usize) {
                Some(b) => *b = true,
                None => return false,
            }
        }
    }
    burning.into_iter().all(|b| b)
}

/// Greedy cover: for radii k−1 down to 0, the vertex covering the most
/// still-uncovered vertices (lowest id on ties).
pub fn greedy_schedule<T: Topology>(g: &T, budget: usize) -> Result<BurnSchedule, Infeasible> {
    let n = g.vertex_count();
    let mut covered = vec![false; n];
    let mut uncovered = n;
    let mut used = vec![false; n];
    let mut sources = Vec::new();
    let mut scratch = BallScratch::new();
    for i in 0..budget {
        if uncovered == 0 {
            break;
        }
        let r = (budget - 1 - i) as u32;
        let mut best: Option<(usize, VertexId)> = None;
        for c in 0..n as VertexId {
            if used[c as usize] {
                continue;
            }
            let mut gain = 0;
            scratch.ball(g, c, r, |v| gain += usize::from(!covered[v as usize]));
            if best.is_none_or(|(b, _)| gain > b) {
                best = Some((gain, c));
            }
        }
        let Some((_, c)) = best else { break };
        used[c as usize] = true;
        sources.push(c);
        scratch.ball(g, c, r, |v| {
            if !covered[v as usize] {
                covered[v as usize] = true;
                uncovered -= 1;
            }
        });
    }
    if uncovered > 0 {
        Err(Infeasible { uncovered })
    } else {
        Ok(BurnSchedule { sources, rounds: budget })
    }
}

/// A BFS forest over the whole graph (roots are the lowest-id vertices of
/// their components).
#[derive(Debug, Clone)]
pub struct BfsForest {
    parent: Vec<VertexId>,
    order: Vec<VertexId>,
    /// Eccentricity of vertex 0 when the graph is connected.
    root_eccentricity: Option<u32>,
}

impl BfsForest {
    pub fn new<T: Topology>(g: &T) -> Self {
        let n = g.vertex_count();
        let mut parent = vec![VertexId::MAX; n];
        let mut depth = vec![0u32; n];
        let mut order = Vec::with_capacity(n);
        let mut components = 0;
        for root in 0..n as VertexId {
            if parent[root as usize] != VertexId::MAX {
                continue;
            }
            components += 1;
            parent[root as usize] = root;
            let start = order.len();
            order.push(root);
            let mut i = start;
            while i < order.len() {
                let v = order[i];
                i += 1;
                let d = depth[v as usize];
                g.for_each_neighbor(v, |u| {
                    if parent[u as usize] == VertexId::MAX {
                        parent[u as usize] = v;
                        depth[u as usize] = d + 1;
                        order.push(u);
                    }
                });
            }
        }
        let root_eccentricity = (components == 1).then(|| depth[*order.last().unwrap() as usize]);
        BfsForest {
            parent,
            order,
            root_eccentricity,
        }
    }

    fn ancestor(&self, mut v: VertexId, steps: usize) -> VertexId {
        for _ in 0..steps {
            let p = self.parent[v as usize];
            if p == v {
                break;
            }
            v = p;
        }
        v
    }

    /// A lower bound on the burning number: a geodesic on d + 1 vertices
    /// meets a radius-r ball in at most 2r + 1 vertices, so k² ≥ d + 1.
    pub fn lower_bound(&self) -> usize {
        match self.root_eccentricity {
            Some(e) => ceil_sqrt(u64::from(e) + 1) as usize,
            None => 1,
        }
    }
}

/// Tree sweep: repeatedly take the deepest uncovered vertex u in the BFS
/// forest and cover the graph ball of the current radius around u's
/// ancestor at that distance. Linear-time per call, meant for graphs far
/// beyond what the greedy cover can handle.
pub fn sweep_schedule<T: Topology>(
    g: &T,
    forest: &BfsForest,
    budget: usize,
    scratch: &mut BallScratch,
) -> Result<BurnSchedule, Infeasible> {
    // The first ball, centered at the root, already covers everything.
    if let (Some(e), Some(&root)) = (forest.root_eccentricity, forest.order.first()) {
        if budget > e as usize {
            return Ok(BurnSchedule { sources: vec![root], rounds: budget });
        }
    }
    let n = g.vertex_count();
    // reach[v] = 1 + the largest radius left when some ball reached v, or 0.
    // A ball arriving with no more radius than that covers nothing new past v.
    let mut reach = vec![0u32; n];
    let mut uncovered = n;
    let mut sources = Vec::new();
    let mut cursor = forest.order.len();
    let queue = &mut scratch.queue;
    for i in 0..budget {
        while cursor > 0 && reach[forest.order[cursor - 1] as usize] > 0 {
            cursor -= 1;
        }
        if cursor == 0 {
            break;
        }
        let r = (budget - 1 - i) as u32;
        let center = forest.ancestor(forest.order[cursor - 1], r as usize);
        sources.push(center);
        if reach[center as usize] > r {
            continue;
        }
        if reach[center as usize] == 0 {
            uncovered -= 1;
        }
        reach[center as usize] = r + 1;
        queue.clear();
        queue.push((center, r));
        let mut head = 0;
        while head < queue.len() {
            let (v, left) = queue[head];
            head += 1;
            if left == 0 || reach[v as usize] != left + 1 {
                continue;
            }
            g.for_each_neighbor(v, |u| {
                let cell = &mut reach[u as usize];
                if *cell < left {
                    if *cell == 0 {
                        uncovered -= 1;
                    }
                    *cell = left;
                    queue.push((u, left - 1));
                }
            });
        }
    }
    if uncovered > 0 {
        Err(Infeasible { uncovered })
    } else {
        Ok(BurnSchedule { sources, rounds: budget })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    pub cap: usize,
    pub node_limit: Option<u64>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            cap: DEFAULT_EXACT_CAP,
            node_limit: None,
        }
    }
}

pub fn exact_burning_number<T: Topology>(g: &T) -> Result<(usize, BurnSchedule), BurningError> {
    exact_burning_number_with(g, &ExactOptions::default())
}

/// Branch and bound over covers, by iterative deepening on k.
pub fn exact_burning_number_with<T: Topology>(
    g: &T,
    opts: &ExactOptions,
) -> Result<(usize, BurnSchedule), BurningError> {
    let n = g.vertex_count();
    let cap = opts.cap.min(MAX_EXACT_CAP);
    if n == 0 {
        return Err(BurningError::EmptyGraph);
    }
    if n > cap {
        return Err(BurningError::GraphTooLarge { vertices: n, cap });
    }
    if !is_connected(g) {
        return Err(BurningError::GraphDisconnected);
    }
    let mut solver = CoverSearch::new(g, opts.node_limit);
    for k in 1..=n {
        if let Some(picks) = solver.solve(k)? {
            return Ok((k, assemble(n, k, picks)));
        }
    }
    unreachable!("k = n always admits a cover");
}

type Mask = u128;

struct CoverSearch {
    n: usize,
    // balls[r][c] = B(c, r) as a bitmask.
    balls: Vec<Vec<Mask>>,
    nodes: u64,
    node_limit: Option<u64>,
    failed: HashSet<(Mask, u64)>,
}

impl CoverSearch {
    fn new<T: Topology>(g: &T, node_limit: Option<u64>) -> Self {
        let n = g.vertex_count();
        let dist: Vec<Vec<u32>> = (0..n as VertexId)
            .map(|s| {
                let d = bfs_distances(g, s, None).expect("vertex exists");
                (0..n as VertexId).map(|v| d.get(v).unwrap_or(u32::MAX)).collect()
            })
            .collect();
        let balls = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        (0..n)
                            .filter(|&v| dist[c][v] as usize <= r)
                            .fold(0, |m, v| m | (1 << v))
                    })
                    .collect()
            })
            .collect();
        CoverSearch {
            n,
            balls,
            nodes: 0,
            node_limit,
            failed: HashSet::new(),
        }
    }

    fn solve(&mut self, k: usize) -> Result<Option<Vec<(usize, VertexId)>>, BurningError> {
        assert!(k <= 64, "radius set is a u64 mask");
        self.failed.clear();
        let all: Mask = if self.n == 128 { !0 } else { (1 << self.n) - 1 };
        let radii = if k == 64 { !0 } else { (1u64 << k) - 1 };
        let mut picks = Vec::new();
        Ok(self.search(all, radii, &mut picks)?.then_some(picks))
    }

    fn search(&mut self, uncovered: Mask, radii: u64, picks: &mut Vec<(usize, VertexId)>) -> Result<bool, BurningError> {
        if uncovered == 0 {
            return Ok(true);
        }
        if radii == 0 {
            return Ok(false);
        }
        self.nodes += 1;
        if self.node_limit.is_some_and(|l| self.nodes > l) {
            return Err(BurningError::SearchLimit { nodes: self.nodes });
        }
        // Even the best ball of every remaining radius cannot cover U.
        let mut reach = 0u32;
        for r in bits64(radii) {
            let r = r.min(self.n - 1);
            reach += self.balls[r]
                .iter()
                .map(|&b| (b & uncovered).count_ones())
                .max()
                .unwrap_or(0);
        }
        if reach < uncovered.count_ones() || self.failed.contains(&(uncovered, radii)) {
            return Ok(false);
        }

        // Branch on the uncovered vertex with the fewest ways to be covered.
        let mut target = 0usize;
        let mut fewest = u32::MAX;
        for u in bits128(uncovered) {
            let options: u32 = bits64(radii)
                .map(|r| self.balls[r.min(self.n - 1)][u].count_ones())
                .sum();
            if options < fewest {
                fewest = options;
                target = u;
            }
        }

        for r in bits64(radii).collect::<Vec<_>>().into_iter().rev() {
            let rr = r.min(self.n - 1);
            let centers: Vec<usize> = bits128(self.balls[rr][target]).collect();
            let gains: Vec<Mask> = centers.iter().map(|&c| self.balls[rr][c] & uncovered).collect();
            // Drop centers whose gain is contained in another's (keeping the
            // lowest id among equals). Sources may repeat during the search;
            // repeats are replaced afterwards, which never shrinks a cover.
            let mut options: Vec<(Mask, usize)> = Vec::new();
            for (i, &gi) in gains.iter().enumerate() {
                let dominated = gains.iter().enumerate().any(|(j, &gj)| {
                    j != i && gi & !gj == 0 && (gi != gj || centers[j] < centers[i])
                });
                if !dominated {
                    options.push((gi, centers[i]));
                }
            }
            options.sort_by_key(|&(gain, c)| (std::cmp::Reverse(gain.count_ones()), c));
            for (gain, c) in options {
                picks.push((r, c as VertexId));
                if self.search(uncovered & !gain, radii & !(1 << r), picks)? {
                    return Ok(true);
                }
                picks.pop();
            }
        }
        self.failed.insert((uncovered, radii));
        Ok(false)
    }
}

fn bits64(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            b
        })
    })
}

fn bits128(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            b
        })
    })
}

/// Turns (radius, center) picks into a full schedule of k distinct sources.
fn assemble(n: usize, k: usize, picks: Vec<(usize, VertexId)>) -> BurnSchedule {
    let mut by_radius: Vec<Option<VertexId>> = vec![None; k];
    for (r, c) in picks {
        by_radius[r] = Some(c);
    }
    let mut used = vec![false; n];
    // Larger radii claim their center first; a repeat at a smaller radius is
    // inside the larger ball anyway.
    for slot in by_radius.iter_mut().rev() {
        if let Some(c) = *slot {
            if used[c as usize] {
                *slot = None;
            } else {
                used[c as usize] = true;
            }
        }
    }
    let mut spare = (0..n as VertexId).filter(|&v| !used[v as usize]);
    let sources = (0..k)
        .rev()
        .map(|r| by_radius[r].unwrap_or_else(|| spare.next().expect("k <= n")))
        .collect();
    BurnSchedule { sources, rounds: k }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlannerTier {
    Empty,
    Exact,
    Greedy,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanOptions {
    pub exact_cap: usize,
    pub exact_node_limit: Option<u64>,
    pub greedy_cap: usize,
    /// Search below the budget for the fewest rounds the heuristic manages.
    pub minimize: bool,
    /// Stop that search at this fraction of the budget.
    pub floor_fraction: f64,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            exact_cap: DEFAULT_EXACT_CAP,
            exact_node_limit: Some(2_000_000),
            greedy_cap: 256,
            minimize: true,
            floor_fraction: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub schedule: BurnSchedule,
    pub tier: PlannerTier,
    pub budget: usize,
    /// The heuristic needed more than the ⌈√(2n)⌉ budget.
    pub budget_exceeded: bool,
}

/// Schedules a full burn of `g`: exact for small graphs, otherwise a
/// heuristic cover started at the ⌈√(2n)⌉ budget (raised, with a warning,
/// if the heuristic falls short).
pub fn plan_burn<T: Topology>(g: &T, opts: &PlanOptions) -> Plan {
    plan_burn_hinted(g, opts, None)
}

/// [`plan_burn`] given an upper bound on the distance from vertex 0 to every
/// vertex of a connected `g`. When the search floor already exceeds it, the
/// sweep's answer is vertex 0 alone and no search is run.
pub fn plan_burn_hinted<T: Topology>(g: &T, opts: &PlanOptions, root_distance_bound: Option<u32>) -> Plan {
    let n = g.vertex_count();
    if n == 0 {
        return Plan {
            schedule: BurnSchedule { sources: vec![], rounds: 1 },
            tier: PlannerTier::Empty,
            budget: 1,
            budget_exceeded: false,
        };
    }
    let budget = sqrt_2n_budget(n as u64) as usize;
    if n <= opts.exact_cap.min(MAX_EXACT_CAP) {
        let exact = ExactOptions {
            cap: opts.exact_cap,
            node_limit: opts.exact_node_limit,
        };
        if let Ok((_, schedule)) = exact_burning_number_with(g, &exact) {
            return Plan {
                budget_exceeded: schedule.rounds > budget,
                schedule,
                tier: PlannerTier::Exact,
                budget,
            };
        }
    }
    let floor = ((opts.floor_fraction * budget as f64).ceil() as usize).min(budget);
    if let Some(bound) = root_distance_bound {
        // ⌈√(ecc + 1)⌉ ≤ floor here, so the search would start and succeed at the floor.
        if n > opts.greedy_cap && opts.minimize && floor > bound as usize {
            return Plan {
                schedule: BurnSchedule { sources: vec![0], rounds: floor },
                tier: PlannerTier::Sweep,
                budget,
                budget_exceeded: false,
            };
        }
    }
    let forest = BfsForest::new(g);
    let mut scratch = BallScratch::new();
    let (tier, mut attempt): (PlannerTier, Box<dyn FnMut(usize) -> Result<BurnSchedule, Infeasible> + '_>) =
        if n <= opts.greedy_cap {
            (PlannerTier::Greedy, Box::new(|k| greedy_schedule(g, k)))
        } else {
            (
                PlannerTier::Sweep,
                Box::new(|k| sweep_schedule(g, &forest, k, &mut scratch)),
            )
        };

    // Try the search floor first: when it succeeds no other attempt is needed.
    let lo = forest.lower_bound().max(floor).min(budget);
    if opts.minimize && lo < budget {
        if let Ok(schedule) = attempt(lo) {
            return Plan {
                schedule,
                tier,
                budget,
                budget_exceeded: false,
            };
        }
    }
    let mut k = budget;
    let mut schedule = loop {
        match attempt(k) {
            Ok(s) => break s,
            Err(e) => {
                warn!(
                    "{tier:?} cover needs more than {k} rounds on {n} vertices ({} uncovered); raising budget",
                    e.uncovered
                );
                k += 1;
            }
        }
    };
    let budget_exceeded = k > budget;
    if opts.minimize && !budget_exceeded {
        let (mut lo, mut hi) = ((lo + 1).min(k), k);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match attempt(mid) {
                Ok(s) => {
                    hi = mid;
                    schedule = s;
                }
                Err(_) => lo = mid + 1,
            }
        }
    }
    Plan {
        schedule,
        tier,
        budget,
        budget_exceeded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::AdjacencyGraph;
    use proptest::prelude::*;

    fn path(n: usize) -> AdjacencyGraph {
        let edges: Vec<_> = (1..n as u32).map(|i| (i - 1, i)).collect();
        AdjacencyGraph::from_edges(n, &edges)
    }

    fn star(leaves: usize) -> AdjacencyGraph {
        let edges: Vec<_> = (1..=leaves as u32).map(|i| (0, i)).collect();
        AdjacencyGraph::from_edges(leaves + 1, &edges)
    }

    fn random_tree(n: usize, seed: u64) -> AdjacencyGraph {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut g = AdjacencyGraph::new(n);
        for v in 1..n as u32 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            g.add_edge(((state >> 33) % u64::from(v)) as u32, v);
        }
        g
    }

    #[test]
    fn small_exact_values() {
        assert_eq!(exact_burning_number(&AdjacencyGraph::new(1)).unwrap().0, 1);
        assert_eq!(exact_burning_number(&path(9)).unwrap().0, 3);
        assert_eq!(exact_burning_number(&path(10)).unwrap().0, 4);
        assert_eq!(exact_burning_number(&star(4)).unwrap().0, 2);
    }

    #[test]
    fn exact_errors() {
        assert_eq!(exact_burning_number(&AdjacencyGraph::new(0)), Err(BurningError::EmptyGraph));
        assert_eq!(
            exact_burning_number(&AdjacencyGraph::new(2)),
            Err(BurningError::GraphDisconnected)
        );
        assert_eq!(
            exact_burning_number(&path(65)),
            Err(BurningError::GraphTooLarge { vertices: 65, cap: 64 })
        );
        let (b, _) = exact_burning_number_with(&path(100), &ExactOptions { cap: 100, node_limit: None }).unwrap();
        assert_eq!(b, 10);
    }

    #[test]
    fn path_schedule_examples() {
        assert_eq!(path_schedule(1), BurnSchedule { sources: vec![0], rounds: 1 });
        assert_eq!(path_schedule(4).rounds, 2);
        let s = path_schedule(9);
        assert_eq!(s, BurnSchedule { sources: vec![2, 6, 8], rounds: 3 });
        assert!(verify_schedule(&path(9), &s));
    }

    #[test]
    fn path_schedule_rounds_and_cover() {
        for n in 1..=10_000usize {
            let s = path_schedule(n);
            assert_eq!(s.rounds as u64, ceil_sqrt(n as u64));
            if n <= 400 {
                assert!(verify_schedule(&path(n), &s), "n = {n}");
            }
        }
    }

    #[test]
    fn greedy_examples() {
        let s = greedy_schedule(&star(4), 2).unwrap();
        assert_eq!(s.sources[0], 0);
        assert!(verify_schedule(&star(4), &s));
        assert_eq!(greedy_schedule(&path(9), 2), Err(Infeasible { uncovered: 5 }));
        assert!(verify_schedule(&path(9), &greedy_schedule(&path(9), 3).unwrap()));
    }

    #[test]
    fn budget_examples() {
        assert_eq!(sqrt_2n_budget(50), 10);
        assert_eq!(sqrt_2n_budget(2), 2);
        assert_eq!(sqrt_2n_budget(1), 2);
    }

    /// Sweep with a full ball search per source.
    fn plain_sweep(g: &AdjacencyGraph, forest: &BfsForest, budget: usize) -> Result<BurnSchedule, Infeasible> {
        let n = g.vertex_count();
        let mut covered = vec![false; n];
        let mut sources = Vec::new();
        let mut scratch = BallScratch::new();
        for i in 0..budget {
            let Some(&u) = forest.order.iter().rev().find(|&&u| !covered[u as usize]) else {
                break;
            };
            let r = budget - 1 - i;
            let center = forest.ancestor(u, r);
            sources.push(center);
            scratch.ball(g, center, r as u32, |v| covered[v as usize] = true);
        }
        match covered.iter().filter(|&&c| !c).count() {
            0 => Ok(BurnSchedule { sources, rounds: budget }),
            uncovered => Err(Infeasible { uncovered }),
        }
    }

    #[test]
    fn sweep_is_optimal_on_paths() {
        let g = path(1000);
        let forest = BfsForest::new(&g);
        let mut scratch = BallScratch::new();
        let s = sweep_schedule(&g, &forest, 32, &mut scratch).unwrap();
        assert!(verify_schedule(&g, &s));
        assert!(sweep_schedule(&g, &forest, 31, &mut scratch).is_err());
    }

    #[test]
    fn planner_tiers() {
        let p = plan_burn(&path(50), &PlanOptions::default());
        assert_eq!((p.tier, p.schedule.rounds), (PlannerTier::Exact, 8));
        let p = plan_burn(&path(200), &PlanOptions::default());
        assert_eq!((p.tier, p.schedule.rounds), (PlannerTier::Greedy, 15));
        let p = plan_burn(&path(5000), &PlanOptions::default());
        assert_eq!((p.tier, p.schedule.rounds), (PlannerTier::Sweep, 71));
        assert!(verify_schedule(&path(5000), &p.schedule));
        let p = plan_burn(&star(3000), &PlanOptions::default());
        assert_eq!(p.schedule.rounds, 2);
        let p = plan_burn(&AdjacencyGraph::new(0), &PlanOptions::default());
        assert_eq!((p.tier, p.schedule.rounds), (PlannerTier::Empty, 1));
    }

    #[test]
    fn planner_without_minimizing_uses_budget() {
        let opts = PlanOptions { minimize: false, ..PlanOptions::default() };
        let p = plan_burn(&path(5000), &opts);
        assert_eq!(p.schedule.rounds, 100);
        assert!(!p.budget_exceeded);
    }

    #[test]
    fn random_trees_stay_within_budget() {
        for seed in 0..30 {
            let g = random_tree(40, seed);
            let (b, s) = exact_burning_number(&g).unwrap();
            assert!(b as u64 <= sqrt_2n_budget(40));
            assert!(verify_schedule(&g, &s) && simulate_schedule(&g, &s));
        }
    }

    proptest! {
        #[test]
        fn schedules_verify_both_ways(n in 1usize..30, seed in any::<u64>()) {
            let g = random_tree(n, seed);
            let (b, s) = exact_burning_number(&g).unwrap();
            prop_assert_eq!(s.sources.len(), b);
            prop_assert!(verify_schedule(&g, &s));
            prop_assert!(simulate_schedule(&g, &s));
            if b > 1 {
                // Minimality: no cover exists with b - 1 rounds.
                prop_assert!(greedy_schedule(&g, b - 1).is_err());
            }
            let budget = sqrt_2n_budget(n as u64) as usize;
            let greedy = greedy_schedule(&g, budget.max(b));
            if let Ok(gs) = greedy {
                prop_assert!(verify_schedule(&g, &gs) && simulate_schedule(&g, &gs));
            }
            let p = plan_burn(&g, &PlanOptions { exact_cap: 0, ..PlanOptions::default() });
            prop_assert!(verify_schedule(&g, &p.schedule));
        }

        #[test]
        fn relabelling_preserves_burning_number(n in 2usize..25, seed in any::<u64>(), shift in any::<u64>()) {
            let g = random_tree(n, seed);
            let mut perm: Vec<u32> = (0..n as u32).collect();
            let mut s = shift;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let mut h = AdjacencyGraph::new(n);
            for v in 0..n as u32 {
                for u in g.neighbor_list(v) {
                    if v < u {
                        h.add_edge(perm[v as usize], perm[u as usize]);
                    }
                }
            }
            prop_assert_eq!(exact_burning_number(&g).unwrap().0, exact_burning_number(&h).unwrap().0);
        }

        #[test]
        fn pruned_sweep_matches_plain_balls(n in 1usize..200, seed in any::<u64>(), extra in 0usize..40, k in 1usize..30) {
            let mut g = random_tree(n, seed);
            let mut state = seed ^ 0x9E37_79B9;
            for _ in 0..extra {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                let a = ((state >> 33) % n as u64) as u32;
                let b = ((state >> 13) % n as u64) as u32;
                if a != b && !g.neighbor_list(a).contains(&b) {
                    g.add_edge(a, b);
                }
            }
            let forest = BfsForest::new(&g);
            prop_assert_eq!(
                sweep_schedule(&g, &forest, k, &mut BallScratch::new()),
                plain_sweep(&g, &forest, k)
            );
        }

        #[test]
        fn root_distance_hint_changes_nothing(n in 257usize..700, seed in any::<u64>(), floor in 0.0f64..1.0, slack in 0u32..3) {
            let g = random_tree(n, seed);
            let ecc = bfs_distances(&g, 0, None).unwrap().max_distance().unwrap();
            let opts = PlanOptions { floor_fraction: floor, ..PlanOptions::default() };
            prop_assert_eq!(plan_burn_hinted(&g, &opts, Some(ecc + slack)), plan_burn(&g, &opts));
        }

        #[test]
        fn sweep_covers_with_enough_rounds(n in 1usize..300, seed in any::<u64>()) {
            let g = random_tree(n, seed);
            let forest = BfsForest::new(&g);
            let s = sweep_schedule(&g, &forest, n, &mut BallScratch::new()).unwrap();
            prop_assert!(verify_schedule(&g, &s));
        }
    }
}
