//! Electrical interpretation of the graph: each edge capacity is the
//! conductance of the link, so its resistance is the reciprocal of the
//! capacity. Potentials come from direct Cholesky factorization of the
//! grounded Laplacian (the row and column of the smallest node id are
//! deleted), which is symmetric positive definite on a connected component.
//!
//! Every accepted solution is residual-checked against the full Kirchhoff
//! system; a round that cannot meet the tolerance aborts with an error
//! instead of silently proceeding.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{NodeId, WeightedGraph};

/// Residual bound for accepting a solve, in units of injected current.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Condition-number estimates above this trigger a warning on stderr.
const CONDITION_WARN_THRESHOLD: f64 = 1e12;

#[derive(Debug, Error, PartialEq)]
pub enum ElectricalError {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("source and sink are the same node ({0})")]
    SameEndpoints(NodeId),
    #[error("nodes {0} and {1} are in different components")]
    DifferentComponents(NodeId, NodeId),
    #[error("node {0} is an injection endpoint; throughput is defined for interior nodes")]
    EndpointExcluded(NodeId),
    #[error("grounded laplacian is singular; component is not connected")]
    SingularSystem,
    #[error("solver residual {0:e} exceeds tolerance {RESIDUAL_TOLERANCE:e}")]
    ResidualTooLarge(f64),
}

/// Lower-triangular Cholesky factor of a dense SPD matrix, row-major.
struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    /// Factors `a` (row-major, n x n). Fails on a non-positive pivot.
    fn factor(a: &[f64], n: usize) -> Option<Self> {
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if d <= 0.0 || !d.is_finite() {
                return None;
            }
            let djj = d.sqrt();
            l[j * n + j] = djj;
            for i in (j + 1)..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / djj;
            }
        }
        Some(Self { n, l })
    }

    /// Solves L L^T x = b in place.
    #[allow(clippy::needless_range_loop)]
    fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l[i * n + k] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in (i + 1)..n {
                s -= self.l[k * n + i] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
    }

    /// Crude spectral condition estimate from the factor diagonal.
    fn condition_estimate(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..self.n {
            let d = self.l[i * self.n + i];
            lo = lo.min(d);
            hi = hi.max(d);
        }
        if lo == 0.0 {
            f64::INFINITY
        } else {
            (hi / lo) * (hi / lo)
        }
    }
}

/// One factorization of a connected component's grounded Laplacian, reused
/// across all (s, t) right-hand sides. The ground is the component's
/// smallest node id and its potential is fixed at 0.
pub struct ComponentSolver<'g> {
    graph: &'g WeightedGraph,
    nodes: Vec<NodeId>,
    chol: Cholesky,
}

impl<'g> ComponentSolver<'g> {
    /// Builds the solver for a graph that is itself a connected component.
    pub fn new(graph: &'g WeightedGraph) -> Result<Self, ElectricalError> {
        let nodes: Vec<NodeId> = graph.nodes().collect();
        let k = nodes.len();
        // Grounded Laplacian over nodes[1..], conductances from capacities.
        let m = k.saturating_sub(1);
        let mut a = vec![0.0; m * m];
        for (row, &v) in nodes.iter().enumerate().skip(1) {
            let mut diag = 0.0;
            for (u, c) in graph.neighbors(v) {
                diag += c;
                if let Ok(col) = nodes.binary_search(&u) {
                    if col >= 1 {
                        a[(row - 1) * m + (col - 1)] = -c;
                    }
                }
            }
            a[(row - 1) * m + (row - 1)] = diag;
        }
        let chol = match Cholesky::factor(&a, m) {
            Some(c) => c,
            None => return Err(ElectricalError::SingularSystem),
        };
        let cond = chol.condition_estimate();
        if cond > CONDITION_WARN_THRESHOLD {
            eprintln!(
                "warning: grounded laplacian condition estimate {cond:.3e} exceeds {CONDITION_WARN_THRESHOLD:e}; \
                 potentials may lose precision"
            );
        }
        Ok(Self { graph, nodes, chol })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    fn index_of(&self, v: NodeId) -> Option<usize> {
        self.nodes.binary_search(&v).ok()
    }

    /// Potentials for a unit current injected at `s` and extracted at `t`,
    /// indexed like `nodes()`, with the ground entry fixed at 0. The full
    /// Kirchhoff residual is checked before the solution is returned.
    pub fn potentials(&self, s: NodeId, t: NodeId) -> Result<Vec<f64>, ElectricalError> {
        if s == t {
            return Err(ElectricalError::SameEndpoints(s));
        }
        let si = self.index_of(s).ok_or(ElectricalError::UnknownNode(s))?;
        let ti = self.index_of(t).ok_or(ElectricalError::UnknownNode(t))?;
        let k = self.nodes.len();
        let mut rhs = vec![0.0; k - 1];
        if si >= 1 {
            rhs[si - 1] += 1.0;
        }
        if ti >= 1 {
            rhs[ti - 1] -= 1.0;
        }
        self.chol.solve(&mut rhs);
        let mut x = vec![0.0; k];
        x[1..].copy_from_slice(&rhs);
        self.check_residual(&x, si, ti)?;
        Ok(x)
    }

    fn check_residual(&self, x: &[f64], si: usize, ti: usize) -> Result<(), ElectricalError> {
        let mut worst = 0.0f64;
        for (i, &v) in self.nodes.iter().enumerate() {
            let mut net = 0.0;
            for (u, c) in self.graph.neighbors(v) {
                let ui = self.index_of(u).expect("neighbor in component");
                net += c * (x[i] - x[ui]);
            }
            let want = if i == si {
                1.0
            } else if i == ti {
                -1.0
            } else {
                0.0
            };
            worst = worst.max((net - want).abs());
        }
        if worst > RESIDUAL_TOLERANCE {
            return Err(ElectricalError::ResidualTooLarge(worst));
        }
        Ok(())
    }

    /// Potential difference x_s - x_t under unit current from `s` to `t`.
    pub fn effective_resistance(&self, s: NodeId, t: NodeId) -> Result<f64, ElectricalError> {
        let x = self.potentials(s, t)?;
        let si = self.index_of(s).unwrap();
        let ti = self.index_of(t).unwrap();
        Ok(x[si] - x[ti])
    }

    /// Inverse of the grounded Laplacian, extended with the zero ground row
    /// and column: entry (i, j) is the potential at node i when one unit of
    /// current enters at node j and returns through the ground. Row-major,
    /// k x k over `nodes()` order. Every column is residual-checked.
    pub fn grounded_inverse(&self) -> Result<Vec<f64>, ElectricalError> {
        let k = self.nodes.len();
        let m = k - 1;
        let mut inv = vec![0.0; k * k];
        for j in 1..k {
            let mut col = vec![0.0; m];
            col[j - 1] = 1.0;
            self.chol.solve(&mut col);
            // Sparse residual check of L_g * col = e_j over non-ground rows.
            let mut worst = 0.0f64;
            for (i, &v) in self.nodes.iter().enumerate().skip(1) {
                let xi = col[i - 1];
                let mut net = 0.0;
                for (u, c) in self.graph.neighbors(v) {
                    let ui = self.index_of(u).expect("neighbor in component");
                    let xu = if ui == 0 { 0.0 } else { col[ui - 1] };
                    net += c * (xi - xu);
                }
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((net - want).abs());
            }
            if worst > RESIDUAL_TOLERANCE {
                return Err(ElectricalError::ResidualTooLarge(worst));
            }
            for i in 1..k {
                inv[i * k + j] = col[i - 1];
            }
        }
        Ok(inv)
    }
}

/// Per-node potentials of one unit-current injection, self-contained so the
/// throughput of any interior node can be read off later.
#[derive(Debug, Clone)]
pub struct PotentialSolution {
    source: NodeId,
    sink: NodeId,
    potentials: BTreeMap<NodeId, f64>,
    edges: Vec<(NodeId, NodeId, f64)>,
}

impl PotentialSolution {
    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    /// Potential of `v` relative to the component ground; None outside the
    /// solved component.
    pub fn potential(&self, v: NodeId) -> Option<f64> {
        self.potentials.get(&v).copied()
    }

    /// Signed current on edge (u, v): conductance times potential drop.
    pub fn edge_current(&self, u: NodeId, v: NodeId) -> Option<f64> {
        let xu = self.potential(u)?;
        let xv = self.potential(v)?;
        let key = (u.min(v), u.max(v));
        self.edges
            .iter()
            .find(|&&(a, b, _)| (a, b) == key)
            .map(|&(_, _, c)| c * (xu - xv))
    }
}

/// Solves the Kirchhoff system for a unit current injected at `s` and
/// extracted at `t` in the component containing both.
pub fn solve_unit_current(
    g: &WeightedGraph,
    s: NodeId,
    t: NodeId,
) -> Result<PotentialSolution, ElectricalError> {
    if s == t {
        return Err(ElectricalError::SameEndpoints(s));
    }
    if !g.contains_node(s) {
        return Err(ElectricalError::UnknownNode(s));
    }
    if !g.contains_node(t) {
        return Err(ElectricalError::UnknownNode(t));
    }
    let component = g
        .connected_components()
        .into_iter()
        .find(|c| c.contains(s))
        .expect("node has a component");
    if !component.contains(t) {
        return Err(ElectricalError::DifferentComponents(s, t));
    }
    let sub = g
        .induced_subgraph(component.members())
        .expect("component nodes exist");
    let solver = ComponentSolver::new(&sub)?;
    let x = solver.potentials(s, t)?;
    let potentials = solver.nodes.iter().zip(&x).map(|(&v, &p)| (v, p)).collect();
    let edges = sub.edges().collect();
    Ok(PotentialSolution {
        source: s,
        sink: t,
        potentials,
        edges,
    })
}

/// Potential difference between `i` and `v` under a unit current applied
/// between them; strictly positive for distinct nodes of one component.
pub fn effective_resistance(
    g: &WeightedGraph,
    i: NodeId,
    v: NodeId,
) -> Result<f64, ElectricalError> {
    let sol = solve_unit_current(g, i, v)?;
    Ok(sol.potential(i).unwrap() - sol.potential(v).unwrap())
}

/// Current passing through interior node `i`: half the sum of absolute
/// currents on its incident edges. Lies in [0, 1] for a unit injection.
pub fn node_throughput(sol: &PotentialSolution, i: NodeId) -> Result<f64, ElectricalError> {
    if i == sol.source || i == sol.sink {
        return Err(ElectricalError::EndpointExcluded(i));
    }
    let xi = sol.potential(i).ok_or(ElectricalError::UnknownNode(i))?;
    let mut total = 0.0;
    for &(u, v, c) in &sol.edges {
        if u == i || v == i {
            let other = if u == i { v } else { u };
            let xo = sol.potential(other).expect("edge endpoint in component");
            total += (c * (xi - xo)).abs();
        }
    }
    Ok(total / 2.0)
}
