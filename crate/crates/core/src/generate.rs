//! Network generators with exact node and edge counts.
//!
//! The experiment sweeps are parameterized by (n, m) directly, so each model
//! is pinned to an exact-count variant:
//!
//! - ER: G(n, m) — m distinct pairs sampled uniformly.
//! - BA: preferential attachment with per-node attachment k = floor(m/n),
//!   seeded by a k-clique, then adjusted to exactly m edges by adding
//!   preferentially-sampled non-edges or deleting uniformly-sampled edges.
//! - WS: ring lattice with even k = 2*floor(m/n), plus (m - nk/2) uniformly
//!   random chords, then each lattice edge rewired with probability
//!   `ws_rewire_p`.
//!
//! All randomness comes from [`crate::rng`], so a spec with a fixed seed
//! reproduces the identical graph on any platform.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{NodeId, WeightedGraph};
use crate::rng::{derive_seed, Xoshiro256StarStar};

/// Attempts at drawing a connected instance before giving up.
const CONNECTIVITY_ATTEMPTS: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphModel {
    ErdosRenyi,
    BarabasiAlbert,
    WattsStrogatz,
}

impl GraphModel {
    pub const ALL: [GraphModel; 3] = [
        GraphModel::ErdosRenyi,
        GraphModel::BarabasiAlbert,
        GraphModel::WattsStrogatz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphModel::ErdosRenyi => "er",
            GraphModel::BarabasiAlbert => "ba",
            GraphModel::WattsStrogatz => "ws",
        }
    }
}

impl fmt::Display for GraphModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "er" => Ok(GraphModel::ErdosRenyi),
            "ba" => Ok(GraphModel::BarabasiAlbert),
            "ws" => Ok(GraphModel::WattsStrogatz),
            other => Err(format!("unknown model '{other}' (expected er, ba, or ws)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub model: GraphModel,
    pub nodes: usize,
    pub edges: usize,
    /// Rewiring probability for WS; ignored by the other models.
    pub ws_rewire_p: f64,
    /// Retry generation (up to a bounded number of attempts) until the
    /// instance is connected.
    pub require_connected: bool,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(model: GraphModel, nodes: usize, edges: usize, seed: u64) -> Self {
        Self {
            model,
            nodes,
            edges,
            ws_rewire_p: 0.1,
            require_connected: false,
            seed,
        }
    }

    pub fn connected(mut self) -> Self {
        self.require_connected = true;
        self
    }

    pub fn with_rewire_p(mut self, p: f64) -> Self {
        self.ws_rewire_p = p;
        self
    }

    fn validate(&self) -> Result<(), GeneratorError> {
        if self.nodes < 2 {
            return Err(GeneratorError::TooFewNodes { nodes: self.nodes });
        }
        let max_edges = self.nodes * (self.nodes - 1) / 2;
        if self.edges > max_edges {
            return Err(GeneratorError::TooManyEdges {
                edges: self.edges,
                max: max_edges,
            });
        }
        if self.require_connected && self.edges < self.nodes - 1 {
            return Err(GeneratorError::TooFewEdgesForConnectivity {
                edges: self.edges,
                needed: self.nodes - 1,
            });
        }
        if !(0.0..=1.0).contains(&self.ws_rewire_p) {
            return Err(GeneratorError::InvalidRewireProbability(self.ws_rewire_p));
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GeneratorError {
    #[error("need at least 2 nodes, got {nodes}")]
    TooFewNodes { nodes: usize },
    #[error("{edges} edges exceed the simple-graph maximum {max}")]
    TooManyEdges { edges: usize, max: usize },
    #[error("{edges} edges cannot connect the graph; at least {needed} required")]
    TooFewEdgesForConnectivity { edges: usize, needed: usize },
    #[error("rewiring probability {0} is outside [0, 1]")]
    InvalidRewireProbability(f64),
    #[error("no connected instance after {attempts} attempts")]
    ConnectivityRetriesExhausted { attempts: u64 },
    #[error("weight range [{lo}, {hi}] is invalid; need 1 <= lo <= hi")]
    InvalidWeightRange { lo: i64, hi: i64 },
}

/// Generates a graph with exactly `spec.nodes` nodes and `spec.edges` edges,
/// unit capacities, node ids 0..n-1. Deterministic for a fixed seed.
pub fn generate(spec: &GeneratorSpec) -> Result<WeightedGraph, GeneratorError> {
    spec.validate()?;
    for attempt in 0..CONNECTIVITY_ATTEMPTS {
        let mut rng = Xoshiro256StarStar::seed_from_u64(derive_seed(spec.seed, &[attempt]));
        let g = match spec.model {
            GraphModel::ErdosRenyi => erdos_renyi(spec.nodes, spec.edges, &mut rng),
            GraphModel::BarabasiAlbert => barabasi_albert(spec.nodes, spec.edges, &mut rng),
            GraphModel::WattsStrogatz => {
                watts_strogatz(spec.nodes, spec.edges, spec.ws_rewire_p, &mut rng)
            }
        };
        debug_assert_eq!(g.node_count(), spec.nodes);
        debug_assert_eq!(g.edge_count(), spec.edges);
        if !spec.require_connected || g.is_connected() {
            return Ok(g);
        }
    }
    Err(GeneratorError::ConnectivityRetriesExhausted {
        attempts: CONNECTIVITY_ATTEMPTS,
    })
}

/// Returns a copy of `g` with every capacity replaced by a uniform random
/// integer in [lo, hi]; topology unchanged, deterministic per seed.
pub fn assign_random_integer_weights(
    g: &WeightedGraph,
    lo: i64,
    hi: i64,
    seed: u64,
) -> Result<WeightedGraph, GeneratorError> {
    if lo < 1 || lo > hi {
        return Err(GeneratorError::InvalidWeightRange { lo, hi });
    }
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let mut out = WeightedGraph::new();
    for v in g.nodes() {
        out.add_node(v);
    }
    let span = (hi - lo + 1) as u64;
    for (u, v, _) in g.edges() {
        let w = lo + rng.gen_range(span) as i64;
        out.add_edge(u, v, w as f64).expect("copied edge is valid");
    }
    Ok(out)
}

fn empty_on(n: usize) -> WeightedGraph {
    let mut g = WeightedGraph::new();
    for v in 0..n {
        g.add_node(v as NodeId);
    }
    g
}

fn erdos_renyi(n: usize, m: usize, rng: &mut Xoshiro256StarStar) -> WeightedGraph {
    let mut g = empty_on(n);
    let max_edges = n * (n - 1) / 2;
    if 2 * m > max_edges {
        // Dense case: partial Fisher-Yates over the full pair list.
        let mut pairs: Vec<(NodeId, NodeId)> = Vec::with_capacity(max_edges);
        for i in 0..n {
            for j in (i + 1)..n {
                pairs.push((i as NodeId, j as NodeId));
            }
        }
        for k in 0..m {
            let pick = k + rng.gen_index(max_edges - k);
            pairs.swap(k, pick);
            let (u, v) = pairs[k];
            g.add_edge(u, v, 1.0).expect("distinct pair");
        }
    } else {
        let mut placed = 0;
        while placed < m {
            let u = rng.gen_index(n) as NodeId;
            let v = rng.gen_index(n) as NodeId;
            if u == v || g.has_edge(u, v) {
                continue;
            }
            g.add_edge(u, v, 1.0).expect("distinct pair");
            placed += 1;
        }
    }
    g
}

fn barabasi_albert(n: usize, m: usize, rng: &mut Xoshiro256StarStar) -> WeightedGraph {
    let k = (m / n).max(1);
    let mut g = empty_on(n);
    // Seed clique on nodes 0..k.
    for i in 0..k {
        for j in (i + 1)..k {
            g.add_edge(i as NodeId, j as NodeId, 1.0).unwrap();
        }
    }
    // Degree-proportional target pool: one entry per edge endpoint.
    let mut pool: Vec<NodeId> = Vec::new();
    for i in 0..k {
        for _ in 0..k.saturating_sub(1) {
            pool.push(i as NodeId);
        }
    }
    for new in k..n {
        let new = new as NodeId;
        let targets = if pool.is_empty() {
            // Degenerate start (k = 1): attach uniformly among seeds.
            vec![rng.gen_index(new as usize) as NodeId]
        } else {
            let mut chosen: Vec<NodeId> = Vec::with_capacity(k);
            while chosen.len() < k {
                let cand = pool[rng.gen_index(pool.len())];
                if !chosen.contains(&cand) {
                    chosen.push(cand);
                }
            }
            chosen
        };
        for &t in &targets {
            g.add_edge(new, t, 1.0).unwrap();
            pool.push(t);
            pool.push(new);
        }
    }
    adjust_edge_count(&mut g, m, rng);
    g
}

fn watts_strogatz(n: usize, m: usize, p: f64, rng: &mut Xoshiro256StarStar) -> WeightedGraph {
    let k = 2 * (m / n);
    let mut g = empty_on(n);
    for j in 1..=(k / 2) {
        for i in 0..n {
            g.add_edge(i as NodeId, ((i + j) % n) as NodeId, 1.0)
                .unwrap();
        }
    }
    // Top up with uniformly random chords to reach exactly m.
    let extra = m - g.edge_count();
    add_random_nonedges(&mut g, extra, rng);
    // Rewire each original lattice edge with probability p.
    for j in 1..=(k / 2) {
        for i in 0..n {
            let u = i as NodeId;
            let v = ((i + j) % n) as NodeId;
            if !g.has_edge(u, v) || rng.gen_f64() >= p {
                continue;
            }
            if g.degree(u) >= n - 1 {
                continue; // saturated; nothing to rewire to
            }
            let mut attempts = 0;
            loop {
                let w = rng.gen_index(n) as NodeId;
                if w != u && !g.has_edge(u, w) {
                    g.remove_edge(u, v);
                    g.add_edge(u, w, 1.0).unwrap();
                    break;
                }
                attempts += 1;
                if attempts > 8 * n {
                    break; // keep the lattice edge
                }
            }
        }
    }
    g
}

/// Deletes uniformly-sampled edges or adds preferentially-sampled non-edges
/// until the graph has exactly `target` edges.
fn adjust_edge_count(g: &mut WeightedGraph, target: usize, rng: &mut Xoshiro256StarStar) {
    while g.edge_count() > target {
        let edges: Vec<(NodeId, NodeId)> = g.edges().map(|(u, v, _)| (u, v)).collect();
        let (u, v) = edges[rng.gen_index(edges.len())];
        g.remove_edge(u, v);
    }
    while g.edge_count() < target {
        let missing = target - g.edge_count();
        if let Some((u, v)) = sample_preferential_nonedge(g, rng) {
            g.add_edge(u, v, 1.0).unwrap();
        } else {
            add_random_nonedges(g, missing, rng);
        }
    }
}

/// Draws a non-edge with both endpoints sampled proportionally to degree.
/// Returns None when rejection sampling stalls (caller falls back to a
/// uniform choice over the enumerated non-edges).
fn sample_preferential_nonedge(
    g: &WeightedGraph,
    rng: &mut Xoshiro256StarStar,
) -> Option<(NodeId, NodeId)> {
    let nodes: Vec<NodeId> = g.nodes().collect();
    let total_degree: usize = nodes.iter().map(|&v| g.degree(v)).sum();
    if total_degree == 0 {
        return None;
    }
    let pick = |rng: &mut Xoshiro256StarStar| {
        let mut r = rng.gen_range(total_degree as u64) as usize;
        for &v in &nodes {
            let d = g.degree(v);
            if r < d {
                return v;
            }
            r -= d;
        }
        unreachable!("cumulative degree covers the range")
    };
    for _ in 0..200 {
        let u = pick(rng);
        let v = pick(rng);
        if u != v && !g.has_edge(u, v) {
            return Some((u, v));
        }
    }
    None
}

/// Adds `count` uniformly random non-edges, falling back to enumerating the
/// remaining non-edges when rejection sampling stalls near saturation.
fn add_random_nonedges(g: &mut WeightedGraph, count: usize, rng: &mut Xoshiro256StarStar) {
    let n = g.node_count();
    let nodes: Vec<NodeId> = g.nodes().collect();
    let mut remaining = count;
    let mut stalls = 0;
    while remaining > 0 {
        let u = nodes[rng.gen_index(n)];
        let v = nodes[rng.gen_index(n)];
        if u != v && !g.has_edge(u, v) {
            g.add_edge(u, v, 1.0).unwrap();
            remaining -= 1;
            stalls = 0;
        } else {
            stalls += 1;
            if stalls > 50 * n {
                break;
            }
        }
    }
    if remaining > 0 {
        let mut nonedges: Vec<(NodeId, NodeId)> = Vec::new();
        for (i, &u) in nodes.iter().enumerate() {
            for &v in &nodes[(i + 1)..] {
                if !g.has_edge(u, v) {
                    nonedges.push((u, v));
                }
            }
        }
        let available = nonedges.len();
        for k in 0..remaining.min(available) {
            let pick = k + rng.gen_index(available - k);
            nonedges.swap(k, pick);
            let (u, v) = nonedges[k];
            g.add_edge(u, v, 1.0).unwrap();
        }
    }
}
