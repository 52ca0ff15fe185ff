//! Node importance metrics on a single connected component.
//!
//! All six metrics take the component as a read-only graph and return a
//! score per node. Betweenness-family metrics are averaged over the
//! (n-1)(n-2)/2 node pairs excluding the scored node; components too small
//! to have interior pairs score 0 everywhere so the attack loop can proceed
//! through fragmented late rounds.
//!
//! The averaging size n is always the component size, since each node's
//! importance is computed within the component where it resides.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::electrical::{ComponentSolver, ElectricalError};
use crate::flow::{gomory_hu_tree, FlowError};
use crate::graph::{NodeId, WeightedGraph};
use crate::paths::{shortest_path_distances, DistanceMode};

/// The six node-importance metrics, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CentralityKind {
    NodeStrength,
    SpBetweenness,
    SpCloseness,
    FlowBetweenness,
    CfBetweenness,
    CfCloseness,
}

impl CentralityKind {
    pub const ALL: [CentralityKind; 6] = [
        CentralityKind::NodeStrength,
        CentralityKind::SpBetweenness,
        CentralityKind::SpCloseness,
        CentralityKind::FlowBetweenness,
        CentralityKind::CfBetweenness,
        CentralityKind::CfCloseness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CentralityKind::NodeStrength => "ns",
            CentralityKind::SpBetweenness => "spb",
            CentralityKind::SpCloseness => "spc",
            CentralityKind::FlowBetweenness => "fb",
            CentralityKind::CfBetweenness => "cfb",
            CentralityKind::CfCloseness => "cfc",
        }
    }
}

impl fmt::Display for CentralityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CentralityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ns" => Ok(CentralityKind::NodeStrength),
            "spb" => Ok(CentralityKind::SpBetweenness),
            "spc" => Ok(CentralityKind::SpCloseness),
            "fb" => Ok(CentralityKind::FlowBetweenness),
            "cfb" => Ok(CentralityKind::CfBetweenness),
            "cfc" => Ok(CentralityKind::CfCloseness),
            other => Err(format!(
                "unknown centrality '{other}' (expected one of ns, spb, spc, fb, cfb, cfc)"
            )),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CentralityError {
    #[error(transparent)]
    Electrical(#[from] ElectricalError),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// Non-negative score for every node of the input component.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CentralityVector {
    scores: BTreeMap<NodeId, f64>,
}

impl CentralityVector {
    fn zeros(g: &WeightedGraph) -> Self {
        Self {
            scores: g.nodes().map(|v| (v, 0.0)).collect(),
        }
    }

    pub fn get(&self, v: NodeId) -> Option<f64> {
        self.scores.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// (node, score) pairs ascending by node id.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.scores.iter().map(|(&v, &s)| (v, s))
    }
}

impl FromIterator<(NodeId, f64)> for CentralityVector {
    fn from_iter<I: IntoIterator<Item = (NodeId, f64)>>(iter: I) -> Self {
        Self {
            scores: iter.into_iter().collect(),
        }
    }
}

/// NS(i): total capacity of the edges incident to i.
pub fn node_strength(g: &WeightedGraph) -> CentralityVector {
    g.nodes().map(|v| (v, g.strength(v))).collect()
}

/// Relative band within which two path lengths count as equal.
const PATH_TIE_TOLERANCE: f64 = 1e-12;

/// Shortest-path betweenness: the averaged fraction of shortest paths
/// between other node pairs that pass through each node, counting all
/// shortest-path multiplicities (Brandes' accumulation).
pub fn sp_betweenness(g: &WeightedGraph, mode: DistanceMode) -> CentralityVector {
    let n = g.node_count();
    if n < 3 {
        return CentralityVector::zeros(g);
    }
    let nodes: Vec<NodeId> = g.nodes().collect();
    let index: BTreeMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut accum = vec![0.0f64; n];

    for &s in &nodes {
        let si = index[&s];
        // Dijkstra with shortest-path counting.
        let mut dist = vec![f64::INFINITY; n];
        let mut sigma = vec![0.0f64; n];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut settled_order: Vec<usize> = Vec::with_capacity(n);
        let mut settled = vec![false; n];
        dist[si] = 0.0;
        sigma[si] = 1.0;
        let mut heap = std::collections::BinaryHeap::new();
        heap.push(std::cmp::Reverse((Ordered(0.0), si)));
        while let Some(std::cmp::Reverse((Ordered(d), v))) = heap.pop() {
            if settled[v] || d > dist[v] {
                continue;
            }
            settled[v] = true;
            settled_order.push(v);
            for (u, c) in g.neighbors(nodes[v]) {
                let ui = index[&u];
                let nd = d + mode.edge_distance(c);
                // Path lengths are float sums, so equal-length paths can
                // land ulps apart; count ties within a relative band so
                // multiplicities survive capacity rescaling.
                if dist[ui].is_infinite() {
                    dist[ui] = nd;
                    sigma[ui] = sigma[v];
                    preds[ui].push(v);
                    heap.push(std::cmp::Reverse((Ordered(nd), ui)));
                    continue;
                }
                let band = PATH_TIE_TOLERANCE * nd.abs().max(dist[ui].abs());
                if nd < dist[ui] - band {
                    dist[ui] = nd;
                    sigma[ui] = sigma[v];
                    preds[ui].clear();
                    preds[ui].push(v);
                    heap.push(std::cmp::Reverse((Ordered(nd), ui)));
                } else if nd <= dist[ui] + band {
                    sigma[ui] += sigma[v];
                    preds[ui].push(v);
                }
            }
        }
        // Dependency accumulation in reverse settle order.
        let mut delta = vec![0.0f64; n];
        for &w in settled_order.iter().rev() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != si {
                accum[w] += delta[w];
            }
        }
    }

    // Brandes sums over ordered pairs; the pair average wants unordered.
    let norm = ((n - 1) * (n - 2)) as f64;
    nodes
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, accum[i] / norm))
        .collect()
}

#[derive(PartialEq)]
struct Ordered(f64);

impl Eq for Ordered {}

impl Ord for Ordered {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for Ordered {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest-path closeness: (n-1) over the summed distances from each node
/// to all others. The input must be connected; singleton components score 0.
pub fn sp_closeness(g: &WeightedGraph, mode: DistanceMode) -> CentralityVector {
    let n = g.node_count();
    if n < 2 {
        return CentralityVector::zeros(g);
    }
    g.nodes()
        .map(|v| {
            let total: f64 = shortest_path_distances(g, v, mode).values().sum();
            (v, (n - 1) as f64 / total)
        })
        .collect()
}

/// Flow betweenness: the averaged fraction of each pair's maximum flow that
/// depends on the node, with F(s,t|i) computed as F(G) - F(G - i).
pub fn flow_betweenness(g: &WeightedGraph) -> Result<CentralityVector, CentralityError> {
    let n = g.node_count();
    if n < 3 {
        return Ok(CentralityVector::zeros(g));
    }
    let nodes: Vec<NodeId> = g.nodes().collect();
    let base_tree = gomory_hu_tree(g)?;
    let base_flows = base_tree.all_pairs_flows();
    let at = |s: usize, t: usize| base_flows[s * n + t];

    let mut scores = BTreeMap::new();
    for (i, &v) in nodes.iter().enumerate() {
        // All-pairs flows of the graph with v removed; cross-component
        // pairs keep the zero fill.
        let mut reduced = g.clone();
        reduced.remove_node(v).expect("node present");
        let mut reduced_flows = vec![0.0f64; n * n];
        for component in reduced.connected_components() {
            if component.size() < 2 {
                continue;
            }
            let members: BTreeSet<NodeId> = component.iter().collect();
            let sub = reduced.induced_subgraph(&members).expect("members exist");
            let tree = gomory_hu_tree(&sub)?;
            let sub_nodes = tree.nodes().to_vec();
            let sub_flows = tree.all_pairs_flows();
            let k = sub_nodes.len();
            for a in 0..k {
                let ai = nodes.binary_search(&sub_nodes[a]).unwrap();
                for b in (a + 1)..k {
                    let bi = nodes.binary_search(&sub_nodes[b]).unwrap();
                    let f = sub_flows[a * k + b];
                    reduced_flows[ai * n + bi] = f;
                    reduced_flows[bi * n + ai] = f;
                }
            }
        }
        let mut sum = 0.0;
        for s in 0..n {
            if s == i {
                continue;
            }
            for t in (s + 1)..n {
                if t == i {
                    continue;
                }
                let full = at(s, t);
                if full <= 0.0 {
                    continue;
                }
                let ratio = (full - reduced_flows[s * n + t]) / full;
                sum += ratio.clamp(0.0, 1.0);
            }
        }
        scores.insert(v, 2.0 * sum / ((n - 1) * (n - 2)) as f64);
    }
    Ok(CentralityVector { scores })
}

/// Current-flow betweenness: the averaged electrical current through each
/// node over unit injections between all other node pairs.
pub fn cf_betweenness(g: &WeightedGraph) -> Result<CentralityVector, CentralityError> {
    let n = g.node_count();
    if n < 3 {
        return Ok(CentralityVector::zeros(g));
    }
    let solver = ComponentSolver::new(g)?;
    let inv = solver.grounded_inverse()?;
    let nodes = solver.nodes().to_vec();
    let index: BTreeMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .map(|(u, v, c)| (index[&u], index[&v], c))
        .collect();

    let mut accum = vec![0.0f64; n];
    let mut x = vec![0.0f64; n];
    let mut half_abs = vec![0.0f64; n];
    for s in 0..n {
        for t in (s + 1)..n {
            for v in 0..n {
                x[v] = inv[v * n + s] - inv[v * n + t];
            }
            half_abs.fill(0.0);
            for &(u, v, c) in &edges {
                let contribution = (c * (x[u] - x[v])).abs() / 2.0;
                half_abs[u] += contribution;
                half_abs[v] += contribution;
            }
            for (i, &h) in half_abs.iter().enumerate() {
                if i != s && i != t {
                    accum[i] += h;
                }
            }
        }
    }

    let norm = ((n - 1) * (n - 2)) as f64 / 2.0;
    Ok(nodes
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, accum[i] / norm))
        .collect())
}

/// Current-flow closeness: (n-1) over the summed effective resistances from
/// each node to all others.
pub fn cf_closeness(g: &WeightedGraph) -> Result<CentralityVector, CentralityError> {
    let n = g.node_count();
    if n < 2 {
        return Ok(CentralityVector::zeros(g));
    }
    let solver = ComponentSolver::new(g)?;
    let inv = solver.grounded_inverse()?;
    let nodes = solver.nodes().to_vec();
    let trace: f64 = (0..n).map(|v| inv[v * n + v]).sum();
    Ok(nodes
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let row_sum: f64 = (0..n).map(|j| inv[i * n + j]).sum();
            // sum over v != i of (C_ii + C_vv - 2 C_iv)
            let resistance_sum = n as f64 * inv[i * n + i] + trace - 2.0 * row_sum;
            (v, (n - 1) as f64 / resistance_sum)
        })
        .collect())
}

/// Dispatches to the metric named by `kind`.
pub fn compute(
    kind: CentralityKind,
    g: &WeightedGraph,
    mode: DistanceMode,
) -> Result<CentralityVector, CentralityError> {
    match kind {
        CentralityKind::NodeStrength => Ok(node_strength(g)),
        CentralityKind::SpBetweenness => Ok(sp_betweenness(g, mode)),
        CentralityKind::SpCloseness => Ok(sp_closeness(g, mode)),
        CentralityKind::FlowBetweenness => flow_betweenness(g),
        CentralityKind::CfBetweenness => cf_betweenness(g),
        CentralityKind::CfCloseness => cf_closeness(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_triangle() -> WeightedGraph {
        WeightedGraph::from_edges([(1, 2, 1.0), (2, 3, 1.0), (1, 3, 1.0)]).unwrap()
    }

    fn unit_path(n: u32) -> WeightedGraph {
        WeightedGraph::from_edges((1..n).map(|i| (i, i + 1, 1.0))).unwrap()
    }

    const EPS: f64 = 1e-12;

    #[test]
    fn node_strength_examples() {
        let star = WeightedGraph::from_edges([(0, 1, 1.0), (0, 2, 2.0), (0, 3, 3.0)]).unwrap();
        assert_eq!(node_strength(&star).get(0), Some(6.0));
        let mut isolated = WeightedGraph::new();
        isolated.add_node(5);
        assert_eq!(node_strength(&isolated).get(5), Some(0.0));
        let tri = node_strength(&unit_triangle());
        for v in 1..=3 {
            assert_eq!(tri.get(v), Some(2.0));
        }
    }

    #[test]
    fn sp_betweenness_on_unit_path4() {
        let c = sp_betweenness(&unit_path(4), DistanceMode::Unit);
        assert!((c.get(2).unwrap() - 2.0 / 3.0).abs() < EPS);
        assert!((c.get(3).unwrap() - 2.0 / 3.0).abs() < EPS);
        assert!(c.get(1).unwrap().abs() < EPS);
        assert!(c.get(4).unwrap().abs() < EPS);
    }

    #[test]
    fn sp_betweenness_on_four_cycle() {
        let g = WeightedGraph::from_edges([(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (4, 1, 1.0)])
            .unwrap();
        let c = sp_betweenness(&g, DistanceMode::Unit);
        for v in 1..=4 {
            assert!((c.get(v).unwrap() - 1.0 / 6.0).abs() < EPS);
        }
    }

    #[test]
    fn sp_betweenness_small_components_score_zero() {
        let c = sp_betweenness(&unit_path(2), DistanceMode::Unit);
        assert_eq!(c.get(1), Some(0.0));
        assert_eq!(c.get(2), Some(0.0));
    }

    #[test]
    fn sp_closeness_examples() {
        let c = sp_closeness(&unit_path(3), DistanceMode::Unit);
        assert!((c.get(2).unwrap() - 1.0).abs() < EPS);
        assert!((c.get(1).unwrap() - 2.0 / 3.0).abs() < EPS);

        let k4 = WeightedGraph::from_edges([
            (1, 2, 1.0),
            (1, 3, 1.0),
            (1, 4, 1.0),
            (2, 3, 1.0),
            (2, 4, 1.0),
            (3, 4, 1.0),
        ])
        .unwrap();
        let c = sp_closeness(&k4, DistanceMode::Unit);
        for v in 1..=4 {
            assert!((c.get(v).unwrap() - 1.0).abs() < EPS);
        }
    }

    #[test]
    fn sp_closeness_reciprocal_distances() {
        // path with capacities (2, 3): d(1,2) = 1/2, d(1,3) = 1/2 + 1/3
        let g = WeightedGraph::from_edges([(1, 2, 2.0), (2, 3, 3.0)]).unwrap();
        let c = sp_closeness(&g, DistanceMode::Reciprocal);
        assert!((c.get(1).unwrap() - 1.5).abs() < EPS);
    }

    #[test]
    fn flow_betweenness_path_interior_is_one() {
        let g = WeightedGraph::from_edges([(1, 2, 4.0), (2, 3, 9.0)]).unwrap();
        let c = flow_betweenness(&g).unwrap();
        assert!((c.get(2).unwrap() - 1.0).abs() < EPS);
        assert!(c.get(1).unwrap().abs() < EPS);
        assert!(c.get(3).unwrap().abs() < EPS);
    }

    #[test]
    fn flow_betweenness_unit_triangle_is_half() {
        let c = flow_betweenness(&unit_triangle()).unwrap();
        for v in 1..=3 {
            assert!((c.get(v).unwrap() - 0.5).abs() < EPS);
        }
    }

    #[test]
    fn cf_betweenness_examples() {
        let c = cf_betweenness(&unit_path(3)).unwrap();
        assert!((c.get(2).unwrap() - 1.0).abs() < EPS);
        assert!(c.get(1).unwrap().abs() < EPS);

        let c = cf_betweenness(&unit_triangle()).unwrap();
        for v in 1..=3 {
            assert!((c.get(v).unwrap() - 1.0 / 3.0).abs() < EPS);
        }
    }

    #[test]
    fn cf_closeness_examples() {
        let g = WeightedGraph::from_edges([(1, 2, 4.0)]).unwrap();
        let c = cf_closeness(&g).unwrap();
        assert!((c.get(1).unwrap() - 4.0).abs() < EPS);
        assert!((c.get(2).unwrap() - 4.0).abs() < EPS);

        let c = cf_closeness(&unit_path(3)).unwrap();
        assert!((c.get(2).unwrap() - 1.0).abs() < EPS);
        assert!((c.get(1).unwrap() - 2.0 / 3.0).abs() < EPS);

        let c = cf_closeness(&unit_triangle()).unwrap();
        for v in 1..=3 {
            assert!((c.get(v).unwrap() - 1.5).abs() < EPS);
        }
    }

    #[test]
    fn dispatcher_matches_direct_calls() {
        let g = unit_triangle();
        let direct = node_strength(&g);
        let via = compute(CentralityKind::NodeStrength, &g, DistanceMode::Reciprocal).unwrap();
        assert_eq!(direct, via);

        let c = compute(
            CentralityKind::CfBetweenness,
            &unit_path(3),
            DistanceMode::Reciprocal,
        )
        .unwrap();
        assert!((c.get(2).unwrap() - 1.0).abs() < EPS);

        let c = compute(
            CentralityKind::SpBetweenness,
            &unit_path(4),
            DistanceMode::Reciprocal,
        )
        .unwrap();
        assert!((c.get(2).unwrap() - 2.0 / 3.0).abs() < EPS);
    }

    #[test]
    fn leaves_score_zero_for_betweenness_kinds() {
        // lollipop: triangle 1-2-3 with leaf 4 on node 3
        let g = WeightedGraph::from_edges([(1, 2, 2.0), (2, 3, 3.0), (1, 3, 1.0), (3, 4, 5.0)])
            .unwrap();
        let spb = sp_betweenness(&g, DistanceMode::Reciprocal);
        let fb = flow_betweenness(&g).unwrap();
        let cfb = cf_betweenness(&g).unwrap();
        for c in [&spb, &fb, &cfb] {
            assert!(c.get(4).unwrap().abs() < EPS, "leaf must score zero");
        }
    }

    #[test]
    fn betweenness_family_stays_in_unit_interval() {
        let g = WeightedGraph::from_edges([
            (0, 1, 3.0),
            (1, 2, 1.0),
            (2, 3, 2.0),
            (3, 0, 4.0),
            (0, 2, 5.0),
        ])
        .unwrap();
        for kind in [
            CentralityKind::SpBetweenness,
            CentralityKind::FlowBetweenness,
            CentralityKind::CfBetweenness,
        ] {
            let c = compute(kind, &g, DistanceMode::Reciprocal).unwrap();
            for (_, score) in c.iter() {
                assert!((-EPS..=1.0 + EPS).contains(&score), "{kind}: {score}");
            }
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in CentralityKind::ALL {
            assert_eq!(kind.name().parse::<CentralityKind>().unwrap(), kind);
        }
        assert!("pagerank".parse::<CentralityKind>().is_err());
    }
}
