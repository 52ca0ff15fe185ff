//! Shortest-path distances over the weighted graph.
//!
//! How an edge capacity turns into a traversal distance is ambiguous for
//! capacity-weighted networks, so it is an explicit mode: the default reads
//! capacity as conductance (high capacity = short edge), `Direct` uses the
//! capacity itself as length, and `Unit` ignores weights entirely.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;
use std::str::FromStr;

use crate::graph::{NodeId, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceMode {
    /// distance = 1 / capacity
    #[default]
    Reciprocal,
    /// distance = capacity
    Direct,
    /// distance = 1
    Unit,
}

impl DistanceMode {
    pub fn edge_distance(self, capacity: f64) -> f64 {
        match self {
            DistanceMode::Reciprocal => 1.0 / capacity,
            DistanceMode::Direct => capacity,
            DistanceMode::Unit => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DistanceMode::Reciprocal => "reciprocal",
            DistanceMode::Direct => "direct",
            DistanceMode::Unit => "unit",
        }
    }
}

impl fmt::Display for DistanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistanceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reciprocal" => Ok(DistanceMode::Reciprocal),
            "direct" => Ok(DistanceMode::Direct),
            "unit" => Ok(DistanceMode::Unit),
            other => Err(format!(
                "unknown distance mode '{other}' (expected reciprocal, direct, or unit)"
            )),
        }
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: NodeId,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on distance with node id as a deterministic tiebreak.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra distances from `source` to every reachable node (including the
/// source itself at 0). Unreachable nodes are absent from the map.
pub fn shortest_path_distances(
    g: &WeightedGraph,
    source: NodeId,
    mode: DistanceMode,
) -> BTreeMap<NodeId, f64> {
    let mut dist: BTreeMap<NodeId, f64> = BTreeMap::new();
    if !g.contains_node(source) {
        return dist;
    }
    let mut heap = BinaryHeap::new();
    dist.insert(source, 0.0);
    heap.push(HeapEntry {
        dist: 0.0,
        node: source,
    });
    while let Some(HeapEntry { dist: d, node: v }) = heap.pop() {
        if d > dist[&v] {
            continue;
        }
        for (u, c) in g.neighbors(v) {
            let nd = d + mode.edge_distance(c);
            if dist.get(&u).is_none_or(|&old| nd < old) {
                dist.insert(u, nd);
                heap.push(HeapEntry { dist: nd, node: u });
            }
        }
    }
    dist
}
