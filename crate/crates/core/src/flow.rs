//! Greedy cluster construction plus max-flow point selection: an
//! (m+1)(1+eps)-approximation with exact per-group quotas.
//!
//! For a guess `gamma`, clusters collect mutually-close points of distinct
//! groups (threshold `gamma/(m+1)`); a bipartite flow network then assigns
//! at most one point per cluster while filling every quota, which keeps all
//! selected points `gamma/(m+1)` apart.

use crate::cluster::ClusterFamily;
use crate::dataset::{Dataset, FairnessSpec};
use crate::error::{Error, Result};
use crate::guessing::{geometric_guesses, largest_feasible, scan_best, GuessSchedule};
use crate::solution::Solution;

/// Greedy clusters for one guess. Scans remaining points in ascending index,
/// restarting after each insertion; a cluster accepts a point only if its
/// group is new to the cluster and it lies within `gamma/(m+1)` of a member
/// (the first point seeds unconditionally). Completed clusters evict their
/// threshold-balls from the pool, and a group's leftovers are dropped once
/// it appears in `k` clusters.
pub fn build_clusters(ds: &Dataset, spec: &FairnessSpec, gamma: f64) -> ClusterFamily {
    assert!(gamma > 0.0, "gamma must be positive");
    let m = ds.m();
    let k = spec.k();
    let threshold = gamma / (m as f64 + 1.0);

    let mut remaining: Vec<bool> = vec![true; ds.n()];
    let mut remaining_count = ds.n();
    let mut clusters_with_group = vec![0usize; m];
    let mut family = ClusterFamily::default();

    while remaining_count > 0 && family.len() <= k * m {
        let mut members: Vec<usize> = Vec::new();
        let mut roster = vec![false; m];
        loop {
            let mut candidate = None;
            for p in 0..ds.n() {
                if !remaining[p] || roster[ds.group_of(p)] || members.contains(&p) {
                    continue;
                }
                if members.is_empty()
                    || members.iter().any(|&x| ds.distance(p, x) < threshold)
                {
                    candidate = Some(p);
                    break;
                }
            }
            match candidate {
                Some(p) => {
                    roster[ds.group_of(p)] = true;
                    members.push(p);
                }
                None => break,
            }
        }
        if members.is_empty() {
            break;
        }

        for q in 0..ds.n() {
            if remaining[q] && members.iter().any(|&p| ds.distance(p, q) < threshold) {
                remaining[q] = false;
                remaining_count -= 1;
            }
        }
        for g in 0..m {
            if roster[g] {
                clusters_with_group[g] += 1;
            }
        }
        family.clusters.push(members);

        for g in 0..m {
            if clusters_with_group[g] >= k {
                for &p in ds.group_members(g) {
                    if remaining[p] {
                        remaining[p] = false;
                        remaining_count -= 1;
                    }
                }
            }
        }
    }
    family
}

/// Flow network with integer capacities: source -> group nodes (capacity
/// k_i) -> cluster nodes (capacity 1 where the cluster holds that group)
/// -> sink (capacity 1).
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    edges: Vec<FlowEdge>,
    adj: Vec<Vec<usize>>,
    pub source: usize,
    pub sink: usize,
    m: usize,
}

#[derive(Debug, Clone)]
struct FlowEdge {
    to: usize,
    cap: u32,
    flow: u32,
}

impl FlowNetwork {
    pub fn build(ds: &Dataset, spec: &FairnessSpec, clusters: &ClusterFamily) -> Self {
        let m = ds.m();
        let t = clusters.len();
        let source = 0;
        let sink = 1 + m + t;
        let mut net = FlowNetwork { edges: Vec::new(), adj: vec![Vec::new(); sink + 1], source, sink, m };
        for g in 0..m {
            net.add_edge(source, 1 + g, spec.quota(g) as u32);
        }
        for (j, members) in clusters.clusters.iter().enumerate() {
            let mut groups_here = vec![false; m];
            for &p in members {
                groups_here[ds.group_of(p)] = true;
            }
            for (g, present) in groups_here.iter().enumerate() {
                if *present {
                    net.add_edge(1 + g, 1 + m + j, 1);
                }
            }
            net.add_edge(1 + m + j, sink, 1);
        }
        net
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: u32) {
        let fwd = self.edges.len();
        self.edges.push(FlowEdge { to, cap, flow: 0 });
        self.adj[from].push(fwd);
        let bwd = self.edges.len();
        self.edges.push(FlowEdge { to: from, cap: 0, flow: 0 });
        self.adj[to].push(bwd);
    }

    /// Edmonds-Karp: breadth-first augmenting paths, scanning adjacency in
    /// insertion order, so the resulting flow is deterministic.
    pub fn max_flow(&mut self) -> u32 {
        let mut total = 0u32;
        loop {
            let mut parent_edge: Vec<Option<usize>> = vec![None; self.adj.len()];
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(self.source);
            let mut seen = vec![false; self.adj.len()];
            seen[self.source] = true;
            while let Some(u) = queue.pop_front() {
                if u == self.sink {
                    break;
                }
                for &e in &self.adj[u] {
                    let edge = &self.edges[e];
                    if !seen[edge.to] && edge.cap > edge.flow {
                        seen[edge.to] = true;
                        parent_edge[edge.to] = Some(e);
                        queue.push_back(edge.to);
                    }
                }
            }
            if !seen[self.sink] {
                return total;
            }
            let mut bottleneck = u32::MAX;
            let mut v = self.sink;
            while v != self.source {
                let e = parent_edge[v].unwrap();
                bottleneck = bottleneck.min(self.edges[e].cap - self.edges[e].flow);
                v = self.edges[e ^ 1].to;
            }
            let mut v = self.sink;
            while v != self.source {
                let e = parent_edge[v].unwrap();
                self.edges[e].flow += bottleneck;
                self.edges[e ^ 1].flow = self.edges[e ^ 1].flow.wrapping_sub(bottleneck);
                v = self.edges[e ^ 1].to;
            }
            total += bottleneck;
        }
    }

    /// Saturated (group, cluster) arcs after `max_flow`.
    pub fn assignments(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for g in 0..self.m {
            for &e in &self.adj[1 + g] {
                let edge = &self.edges[e];
                if edge.cap == 1 && edge.flow == 1 && edge.to > self.m {
                    out.push((g, edge.to - 1 - self.m));
                }
            }
        }
        out
    }
}

/// One guess of the greedy-flow algorithm: `Some` with selected points when
/// the max flow saturates every quota, `None` when the guess is too large.
pub fn fair_greedy_flow(ds: &Dataset, spec: &FairnessSpec, gamma: f64) -> Option<Solution> {
    let clusters = build_clusters(ds, spec, gamma);
    let mut net = FlowNetwork::build(ds, spec, &clusters);
    let flow = net.max_flow();
    if flow as usize != spec.k() {
        return None;
    }
    let mut selected = Vec::with_capacity(spec.k());
    for (g, j) in net.assignments() {
        let p = clusters.clusters[j]
            .iter()
            .copied()
            .find(|&p| ds.group_of(p) == g)
            .expect("saturated arc implies a member of that group");
        selected.push(p);
    }
    Some(Solution::new(ds, selected, Some(gamma), 1, "greedy-flow"))
}

/// Guess range for the search: positive pairwise extremes.
fn guess_range(ds: &Dataset) -> Result<(f64, f64)> {
    let d_min = ds
        .min_positive_distance()
        .ok_or_else(|| Error::EmptySchedule("all points coincide".into()))?;
    Ok((d_min, ds.max_distance()))
}

/// Full scan of the geometric grid, keeping the best non-abort solution.
/// Success at a given gamma is not proven monotone, so the scan is the
/// default; the guarantee is `div >= l* / ((m+1)(1+eps))`.
pub fn fair_greedy_flow_search(ds: &Dataset, spec: &FairnessSpec, eps: f64) -> Result<Solution> {
    spec.check_feasible(ds)?;
    let (lo, hi) = guess_range(ds)?;
    let schedule = geometric_guesses(lo, hi, eps)?;
    scan_best(&schedule, |gamma| Ok(fair_greedy_flow(ds, spec, gamma)))?
        .ok_or_else(|| Error::NoFeasibleGuess("no guess produced a full flow".into()))
}

/// Opt-in binary-search variant; assumes success is monotone in gamma.
pub fn fair_greedy_flow_search_binary(
    ds: &Dataset,
    spec: &FairnessSpec,
    eps: f64,
) -> Result<Solution> {
    spec.check_feasible(ds)?;
    let (lo, hi) = guess_range(ds)?;
    let schedule: GuessSchedule = geometric_guesses(lo, hi, eps)?;
    let gamma = largest_feasible(&schedule, |g| Ok(fair_greedy_flow(ds, spec, g).is_some()))?
        .ok_or_else(|| Error::NoFeasibleGuess("no guess produced a full flow".into()))?;
    Ok(fair_greedy_flow(ds, spec, gamma).expect("gamma came from a successful probe"))
}
