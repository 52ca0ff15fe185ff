//! Exact maximum flow, Gomory-Hu trees, and average network flow.
//!
//! Undirected edges are modeled as two antiparallel arcs, each carrying the
//! full edge capacity and acting as the other's residual. The solver is
//! Dinic's algorithm; with integer capacities every residual stays an exact
//! integer, so flow values on integer-weighted graphs are exact.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{NodeId, WeightedGraph};

#[derive(Debug, Error, PartialEq)]
pub enum FlowError {
    #[error("source and sink are the same node ({0})")]
    SameEndpoints(NodeId),
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("gomory-hu tree requires a connected graph; pass components separately")]
    Disconnected,
    #[error("node {0} is not part of this tree")]
    NotInTree(NodeId),
}

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: f64,
    rev: usize,
}

/// Dinic solver over a dense re-indexing of a graph's nodes.
///
/// `reset` restores the initial capacities so one network can serve the
/// n-1 flow computations of a Gomory-Hu construction.
pub(crate) struct DinicNetwork {
    nodes: Vec<NodeId>,
    adj: Vec<Vec<Arc>>,
    base_caps: Vec<Vec<f64>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl DinicNetwork {
    pub(crate) fn from_graph(g: &WeightedGraph) -> Self {
        let nodes: Vec<NodeId> = g.nodes().collect();
        let mut adj: Vec<Vec<Arc>> = vec![Vec::new(); nodes.len()];
        let index = |v: NodeId| nodes.binary_search(&v).expect("node indexed");
        for (u, v, c) in g.edges() {
            let (ui, vi) = (index(u), index(v));
            let (rev_u, rev_v) = (adj[vi].len(), adj[ui].len());
            adj[ui].push(Arc {
                to: vi,
                cap: c,
                rev: rev_u,
            });
            adj[vi].push(Arc {
                to: ui,
                cap: c,
                rev: rev_v,
            });
        }
        let base_caps = adj
            .iter()
            .map(|arcs| arcs.iter().map(|a| a.cap).collect())
            .collect();
        let n = nodes.len();
        Self {
            nodes,
            adj,
            base_caps,
            level: vec![-1; n],
            iter: vec![0; n],
        }
    }

    pub(crate) fn index_of(&self, v: NodeId) -> Option<usize> {
        self.nodes.binary_search(&v).ok()
    }

    pub(crate) fn reset(&mut self) {
        for (arcs, caps) in self.adj.iter_mut().zip(&self.base_caps) {
            for (arc, &c) in arcs.iter_mut().zip(caps) {
                arc.cap = c;
            }
        }
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for arc in &self.adj[u] {
                if arc.cap > 0.0 && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: f64) -> f64 {
        if u == t {
            return pushed;
        }
        while self.iter[u] < self.adj[u].len() {
            let i = self.iter[u];
            let Arc { to, cap, rev } = self.adj[u][i];
            if cap > 0.0 && self.level[to] == self.level[u] + 1 {
                let d = self.dfs(to, t, pushed.min(cap));
                if d > 0.0 {
                    self.adj[u][i].cap -= d;
                    self.adj[to][rev].cap += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0.0
    }

    /// Max flow between dense indices; leaves the residual network in place
    /// so the min-cut side can be read off afterwards.
    pub(crate) fn max_flow_indexed(&mut self, s: usize, t: usize) -> f64 {
        let mut total = 0.0;
        while self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let pushed = self.dfs(s, t, f64::INFINITY);
                if pushed <= 0.0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    /// Dense indices reachable from `s` through positive residual capacity.
    /// Valid immediately after `max_flow_indexed`; this is the source side
    /// of a minimum cut.
    pub(crate) fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for arc in &self.adj[u] {
                if arc.cap > 0.0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}

/// Exact max flow between `s` and `t`, treating each undirected edge as
/// capacity c(i, j) in both directions. Returns 0 when the endpoints are
/// disconnected.
pub fn max_flow(g: &WeightedGraph, s: NodeId, t: NodeId) -> Result<f64, FlowError> {
    if s == t {
        return Err(FlowError::SameEndpoints(s));
    }
    if !g.contains_node(s) {
        return Err(FlowError::UnknownNode(s));
    }
    if !g.contains_node(t) {
        return Err(FlowError::UnknownNode(t));
    }
    let mut net = DinicNetwork::from_graph(g);
    let si = net.index_of(s).unwrap();
    let ti = net.index_of(t).unwrap();
    Ok(net.max_flow_indexed(si, ti))
}

/// Tree of n-1 weighted edges whose path minima equal all-pairs max-flow
/// values in the source graph.
#[derive(Debug, Clone)]
pub struct GomoryHuTree {
    nodes: Vec<NodeId>,
    edges: Vec<(NodeId, NodeId, f64)>,
}

impl GomoryHuTree {
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(NodeId, NodeId, f64)] {
        &self.edges
    }

    /// Max flow between `s` and `t` recovered as the minimum edge weight on
    /// the unique tree path.
    pub fn flow_between(&self, s: NodeId, t: NodeId) -> Result<f64, FlowError> {
        if s == t {
            return Err(FlowError::SameEndpoints(s));
        }
        let si = self
            .nodes
            .binary_search(&s)
            .map_err(|_| FlowError::NotInTree(s))?;
        let ti = self
            .nodes
            .binary_search(&t)
            .map_err(|_| FlowError::NotInTree(t))?;
        let n = self.nodes.len();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(u, v, w) in &self.edges {
            let ui = self.nodes.binary_search(&u).unwrap();
            let vi = self.nodes.binary_search(&v).unwrap();
            adj[ui].push((vi, w));
            adj[vi].push((ui, w));
        }
        // DFS from s tracking the running path minimum.
        let mut best = vec![f64::NEG_INFINITY; n];
        best[si] = f64::INFINITY;
        let mut stack = vec![si];
        while let Some(u) = stack.pop() {
            if u == ti {
                break;
            }
            for &(v, w) in &adj[u] {
                if best[v] == f64::NEG_INFINITY {
                    best[v] = best[u].min(w);
                    stack.push(v);
                }
            }
        }
        Ok(best[ti].max(0.0))
    }

    /// All-pairs max-flow values as a row-major matrix over `nodes()` order,
    /// built with one path-minimum traversal per source node.
    pub fn all_pairs_flows(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(u, v, w) in &self.edges {
            let ui = self.nodes.binary_search(&u).unwrap();
            let vi = self.nodes.binary_search(&v).unwrap();
            adj[ui].push((vi, w));
            adj[vi].push((ui, w));
        }
        let mut flows = vec![0.0; n * n];
        for s in 0..n {
            let mut best = vec![f64::NEG_INFINITY; n];
            best[s] = f64::INFINITY;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &(v, w) in &adj[u] {
                    if best[v] == f64::NEG_INFINITY {
                        best[v] = best[u].min(w);
                        stack.push(v);
                    }
                }
            }
            for t in 0..n {
                if t != s {
                    flows[s * n + t] = best[t];
                }
            }
        }
        flows
    }

    /// Sum of max-flow values over all unordered node pairs of the tree,
    /// computed by merging tree edges in descending weight order: when an
    /// edge of weight w first connects groups of sizes a and b, exactly
    /// a*b pairs have bottleneck w.
    pub fn pairwise_flow_sum(&self) -> f64 {
        let n = self.nodes.len();
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.sort_by(|&a, &b| self.edges[b].2.total_cmp(&self.edges[a].2).then(a.cmp(&b)));
        let mut parent: Vec<usize> = (0..n).collect();
        let mut size = vec![1usize; n];
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut sum = 0.0;
        for idx in order {
            let (u, v, w) = self.edges[idx];
            let ui = self.nodes.binary_search(&u).unwrap();
            let vi = self.nodes.binary_search(&v).unwrap();
            let (ru, rv) = (find(&mut parent, ui), find(&mut parent, vi));
            debug_assert_ne!(ru, rv, "tree edges never form a cycle");
            sum += w * (size[ru] * size[rv]) as f64;
            parent[ru] = rv;
            size[rv] += size[ru];
        }
        sum
    }
}

/// Builds a Gomory-Hu tree for a connected graph with exactly n-1 max-flow
/// computations (Gusfield's variant, no node contraction).
pub fn gomory_hu_tree(g: &WeightedGraph) -> Result<GomoryHuTree, FlowError> {
    if !g.is_empty() && !g.is_connected() {
        return Err(FlowError::Disconnected);
    }
    let nodes: Vec<NodeId> = g.nodes().collect();
    let n = nodes.len();
    if n <= 1 {
        return Ok(GomoryHuTree {
            nodes,
            edges: Vec::new(),
        });
    }
    let mut net = DinicNetwork::from_graph(g);
    let mut parent = vec![0usize; n];
    let mut weight = vec![0.0f64; n];
    for i in 1..n {
        net.reset();
        let f = net.max_flow_indexed(i, parent[i]);
        weight[i] = f;
        let side = net.residual_reachable(i);
        for j in (i + 1)..n {
            if parent[j] == parent[i] && side[j] {
                parent[j] = i;
            }
        }
    }
    let edges = (1..n)
        .map(|i| (nodes[i], nodes[parent[i]], weight[i]))
        .collect();
    Ok(GomoryHuTree { nodes, edges })
}

/// Average network flow: the mean of max-flow values over all unordered
/// node pairs, with disconnected pairs contributing 0. Defined as 0 for
/// graphs with fewer than two nodes.
pub fn anf(g: &WeightedGraph) -> f64 {
    let n = g.node_count();
    if n < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for component in g.connected_components() {
        if component.size() < 2 {
            continue;
        }
        let members: BTreeSet<NodeId> = component.iter().collect();
        let sub = g.induced_subgraph(&members).expect("component nodes exist");
        let tree = gomory_hu_tree(&sub).expect("component is connected");
        total += tree.pairwise_flow_sum();
    }
    total / (n * (n - 1) / 2) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_triangle() -> WeightedGraph {
        WeightedGraph::from_edges([(1, 2, 1.0), (2, 3, 1.0), (1, 3, 1.0)]).unwrap()
    }

    #[test]
    fn series_bottleneck() {
        let g = WeightedGraph::from_edges([(1, 2, 2.0), (2, 3, 3.0)]).unwrap();
        assert_eq!(max_flow(&g, 1, 3).unwrap(), 2.0);
    }

    #[test]
    fn unit_triangle_flow_is_two_for_every_pair() {
        let g = unit_triangle();
        for (s, t) in [(1, 2), (2, 3), (1, 3), (3, 1)] {
            assert_eq!(max_flow(&g, s, t).unwrap(), 2.0);
        }
    }

    #[test]
    fn diamond_with_cross_edge() {
        // 1-2(1), 1-3(1), 2-4(1), 3-4(1), 2-3(5); the {1} cut bounds F(1,4) at 2.
        let g = WeightedGraph::from_edges([
            (1, 2, 1.0),
            (1, 3, 1.0),
            (2, 4, 1.0),
            (3, 4, 1.0),
            (2, 3, 5.0),
        ])
        .unwrap();
        assert_eq!(max_flow(&g, 1, 4).unwrap(), 2.0);
    }

    #[test]
    fn disconnected_pair_has_zero_flow() {
        let g = WeightedGraph::from_edges([(1, 2, 1.0), (3, 4, 1.0)]).unwrap();
        assert_eq!(max_flow(&g, 1, 3).unwrap(), 0.0);
    }

    #[test]
    fn max_flow_error_paths() {
        let g = unit_triangle();
        assert_eq!(max_flow(&g, 1, 1), Err(FlowError::SameEndpoints(1)));
        assert_eq!(max_flow(&g, 1, 9), Err(FlowError::UnknownNode(9)));
        assert_eq!(max_flow(&g, 9, 1), Err(FlowError::UnknownNode(9)));
    }

    #[test]
    fn flow_is_symmetric() {
        let g = WeightedGraph::from_edges([
            (0, 1, 3.0),
            (1, 2, 5.0),
            (0, 2, 2.0),
            (2, 3, 4.0),
            (1, 3, 1.0),
        ])
        .unwrap();
        for s in 0..4u32 {
            for t in (s + 1)..4u32 {
                assert_eq!(max_flow(&g, s, t).unwrap(), max_flow(&g, t, s).unwrap());
            }
        }
    }

    #[test]
    fn gomory_hu_of_path_is_the_path() {
        let g = WeightedGraph::from_edges([(1, 2, 2.0), (2, 3, 3.0)]).unwrap();
        let tree = gomory_hu_tree(&g).unwrap();
        assert_eq!(tree.edges().len(), 2);
        assert_eq!(tree.flow_between(1, 2).unwrap(), 2.0);
        assert_eq!(tree.flow_between(2, 3).unwrap(), 3.0);
        assert_eq!(tree.flow_between(1, 3).unwrap(), 2.0);
    }

    #[test]
    fn gomory_hu_triangle_path_minima() {
        let tree = gomory_hu_tree(&unit_triangle()).unwrap();
        for (s, t) in [(1, 2), (2, 3), (1, 3)] {
            assert_eq!(tree.flow_between(s, t).unwrap(), 2.0);
        }
    }

    #[test]
    fn gomory_hu_rejects_disconnected_input() {
        let g = WeightedGraph::from_edges([(1, 2, 1.0), (3, 4, 1.0)]).unwrap();
        assert!(matches!(gomory_hu_tree(&g), Err(FlowError::Disconnected)));
    }

    #[test]
    fn gomory_hu_singleton_is_edgeless() {
        let mut g = WeightedGraph::new();
        g.add_node(7);
        let tree = gomory_hu_tree(&g).unwrap();
        assert!(tree.edges().is_empty());
    }

    #[test]
    fn anf_unit_triangle() {
        assert_eq!(anf(&unit_triangle()), 2.0);
    }

    #[test]
    fn anf_weighted_path() {
        let g = WeightedGraph::from_edges([(1, 2, 2.0), (2, 3, 3.0)]).unwrap();
        assert!((anf(&g) - 7.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn anf_two_isolated_nodes_is_zero() {
        let mut g = WeightedGraph::new();
        g.add_node(1);
        g.add_node(2);
        assert_eq!(anf(&g), 0.0);
    }

    #[test]
    fn anf_counts_cross_component_pairs_as_zero() {
        // Triangle {1,2,3} plus isolated node 4: connected pairs carry 2,
        // the three pairs involving 4 carry 0.
        let mut g = unit_triangle();
        g.add_node(4);
        assert_eq!(anf(&g), (3.0 * 2.0) / 6.0);
    }

    #[test]
    fn anf_below_two_nodes_is_zero() {
        let mut g = WeightedGraph::new();
        assert_eq!(anf(&g), 0.0);
        g.add_node(1);
        assert_eq!(anf(&g), 0.0);
    }

    #[test]
    fn pairwise_sum_matches_per_pair_queries() {
        let g = WeightedGraph::from_edges([
            (0, 1, 3.0),
            (1, 2, 5.0),
            (0, 2, 2.0),
            (2, 3, 4.0),
            (1, 3, 1.0),
        ])
        .unwrap();
        let tree = gomory_hu_tree(&g).unwrap();
        let mut by_query = 0.0;
        for s in 0..4u32 {
            for t in (s + 1)..4u32 {
                by_query += tree.flow_between(s, t).unwrap();
            }
        }
        assert!((tree.pairwise_flow_sum() - by_query).abs() < 1e-12);
    }
}
