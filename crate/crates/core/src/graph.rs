//! Weighted undirected simple graph with stable node ids.
//!
//! Node ids are assigned at load or generation time and never reused, so an
//! attack trace can name removed nodes unambiguously. Adjacency is kept in
//! ordered maps; every iteration order in this crate is therefore
//! deterministic.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub type NodeId = u32;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(NodeId),
    #[error("edge ({0}, {1}) capacity must be positive and finite, got {2}")]
    InvalidCapacity(NodeId, NodeId, f64),
}

/// Undirected simple graph with positive real edge capacities.
///
/// Each edge (i, j) is retrievable under either endpoint order. Duplicate
/// insertions collapse by keeping the maximum capacity; real grid data can
/// list a corridor twice and the maximum is the conservative choice for flow
/// metrics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeightedGraph {
    adj: BTreeMap<NodeId, BTreeMap<NodeId, f64>>,
}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from `(u, v, capacity)` triples, adding endpoints as
    /// needed. Fails on self-loops or non-positive capacities.
    pub fn from_edges<I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut g = Self::new();
        for (u, v, c) in edges {
            g.add_node(u);
            g.add_node(v);
            g.add_edge(u, v, c)?;
        }
        Ok(g)
    }

    /// Adds an isolated node; a no-op if the id already exists.
    pub fn add_node(&mut self, v: NodeId) {
        self.adj.entry(v).or_default();
    }

    /// Inserts edge (u, v) with the given capacity. Both endpoints must
    /// already exist. If the edge is already present the larger capacity
    /// wins.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId, capacity: f64) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if capacity <= 0.0 || !capacity.is_finite() {
            return Err(GraphError::InvalidCapacity(u, v, capacity));
        }
        if !self.adj.contains_key(&u) {
            return Err(GraphError::UnknownNode(u));
        }
        if !self.adj.contains_key(&v) {
            return Err(GraphError::UnknownNode(v));
        }
        let merged = match self.capacity(u, v) {
            Some(existing) => existing.max(capacity),
            None => capacity,
        };
        self.adj.get_mut(&u).unwrap().insert(v, merged);
        self.adj.get_mut(&v).unwrap().insert(u, merged);
        Ok(())
    }

    /// Removes edge (u, v) if present; returns whether it existed.
    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        let existed = self.adj.get_mut(&u).is_some_and(|n| n.remove(&v).is_some());
        if existed {
            self.adj.get_mut(&v).expect("edge was symmetric").remove(&u);
        }
        existed
    }

    /// Removes node `v` and exactly its incident edges.
    pub fn remove_node(&mut self, v: NodeId) -> Result<(), GraphError> {
        let neighbors = self.adj.remove(&v).ok_or(GraphError::UnknownNode(v))?;
        for u in neighbors.keys() {
            self.adj.get_mut(u).unwrap().remove(&v);
        }
        Ok(())
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains_key(&v))
    }

    pub fn capacity(&self, u: NodeId, v: NodeId) -> Option<f64> {
        self.adj.get(&u).and_then(|n| n.get(&v)).copied()
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Node ids in ascending order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.adj.keys().copied()
    }

    /// Neighbors of `v` with capacities, ascending by neighbor id.
    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.adj
            .get(&v)
            .into_iter()
            .flat_map(|n| n.iter().map(|(&u, &c)| (u, c)))
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj.get(&v).map_or(0, BTreeMap::len)
    }

    /// Each edge once as (u, v, capacity) with u < v, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.adj.iter().flat_map(|(&u, nbrs)| {
            nbrs.iter()
                .filter(move |(&v, _)| u < v)
                .map(move |(&v, &c)| (u, v, c))
        })
    }

    /// Sum of incident capacities of `v` (0 for an isolated node).
    pub fn strength(&self, v: NodeId) -> f64 {
        self.neighbors(v).map(|(_, c)| c).sum()
    }

    /// Total capacity over all edges.
    pub fn total_capacity(&self) -> f64 {
        self.edges().map(|(_, _, c)| c).sum()
    }

    /// Returns a copy with every capacity multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for nbrs in out.adj.values_mut() {
            for c in nbrs.values_mut() {
                *c *= factor;
            }
        }
        out
    }

    /// Maximal connected node sets, ordered by smallest member id.
    pub fn connected_components(&self) -> Vec<Component> {
        let mut seen: BTreeSet<NodeId> = BTreeSet::new();
        let mut components = Vec::new();
        for start in self.adj.keys().copied() {
            if seen.contains(&start) {
                continue;
            }
            let mut members = BTreeSet::new();
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                if !members.insert(v) {
                    continue;
                }
                for (u, _) in self.neighbors(v) {
                    if !members.contains(&u) {
                        stack.push(u);
                    }
                }
            }
            seen.extend(members.iter().copied());
            components.push(Component { members });
        }
        components
    }

    /// Size of the largest connected component; 0 for the empty graph.
    pub fn largest_component_size(&self) -> usize {
        self.connected_components()
            .iter()
            .map(Component::size)
            .max()
            .unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.largest_component_size() == self.node_count() && !self.is_empty()
    }

    /// Subgraph on exactly the requested nodes, keeping all edges between
    /// them with their capacities.
    pub fn induced_subgraph(&self, nodes: &BTreeSet<NodeId>) -> Result<Self, GraphError> {
        for &v in nodes {
            if !self.contains_node(v) {
                return Err(GraphError::UnknownNode(v));
            }
        }
        let mut adj = BTreeMap::new();
        for &v in nodes {
            let kept: BTreeMap<NodeId, f64> = self
                .neighbors(v)
                .filter(|(u, _)| nodes.contains(u))
                .collect();
            adj.insert(v, kept);
        }
        Ok(Self { adj })
    }
}

/// One maximal connected set of nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    members: BTreeSet<NodeId>,
}

impl Component {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.contains(&v)
    }

    /// Smallest member id; components are ordered by this.
    pub fn min_id(&self) -> NodeId {
        *self
            .members
            .iter()
            .next()
            .expect("component is never empty")
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.members.iter().copied()
    }

    pub fn members(&self) -> &BTreeSet<NodeId> {
        &self.members
    }
}
