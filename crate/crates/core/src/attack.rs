//! The adaptive targeted-attack loop.
//!
//! Each round recomputes connected components, recomputes the chosen
//! centrality per component, removes the node with the globally highest
//! value, and snapshots the shrunk graph, until no nodes remain. Ties are
//! broken by the configured policy; centrality values within a relative
//! tolerance count as tied, since electrical solves carry last-ulp noise
//! that must not reorder removals across platforms.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use thiserror::Error;

use crate::centrality::{compute, CentralityError, CentralityKind};
use crate::graph::{NodeId, WeightedGraph};
use crate::paths::DistanceMode;
use crate::rng::Xoshiro256StarStar;
use crate::robustness::{
    attack_average, snapshot_selected, MetricKind, MetricSelection, RobustnessError, RoundSnapshot,
};

/// Relative tolerance under which two centrality values count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreakPolicy {
    /// Uniform choice among tied nodes from a seeded stream (the
    /// experiment default).
    SeededRandom(u64),
    /// Smallest node id wins; useful for cross-platform regression tests.
    LowestId,
}

impl fmt::Display for TieBreakPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieBreakPolicy::SeededRandom(seed) => write!(f, "seeded({seed})"),
            TieBreakPolicy::LowestId => write!(f, "lowest-id"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackConfig {
    pub kind: CentralityKind,
    pub policy: TieBreakPolicy,
    pub distance_mode: DistanceMode,
    /// Which snapshot quantities to record each round.
    pub metrics: MetricSelection,
}

impl AttackConfig {
    pub fn new(kind: CentralityKind) -> Self {
        Self {
            kind,
            policy: TieBreakPolicy::LowestId,
            distance_mode: DistanceMode::Reciprocal,
            metrics: MetricSelection::all(),
        }
    }

    pub fn with_policy(mut self, policy: TieBreakPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_distance_mode(mut self, mode: DistanceMode) -> Self {
        self.distance_mode = mode;
        self
    }

    pub fn with_metrics(mut self, metrics: MetricSelection) -> Self {
        self.metrics = metrics;
        self
    }
}

/// One removal decision.
#[derive(Debug, Clone, PartialEq)]
pub struct Removal {
    pub round: usize,
    pub node: NodeId,
    /// The removed node's centrality value in the round it was removed.
    pub score: f64,
    /// How many nodes were tied for the maximum this round.
    pub tied_candidates: usize,
}

/// Complete record of one attack: every removal and every post-round
/// snapshot, plus the initial graph's baseline snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackTrace {
    pub kind: CentralityKind,
    pub policy: TieBreakPolicy,
    pub distance_mode: DistanceMode,
    pub initial: RoundSnapshot,
    pub initial_edges: usize,
    pub removals: Vec<Removal>,
    pub snapshots: Vec<RoundSnapshot>,
}

impl AttackTrace {
    /// Number of rounds in which more than one node was tied for removal.
    pub fn tie_rounds(&self) -> usize {
        self.removals
            .iter()
            .filter(|r| r.tied_candidates > 1)
            .count()
    }

    /// Serializes the trace as CSV with the fixed header
    /// `round,removed_node,centrality_value,lcc,tf,aspl,eff,anf`;
    /// unpopulated metric fields are left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("round,removed_node,centrality_value,lcc,tf,aspl,eff,anf\n");
        for (removal, snap) in self.removals.iter().zip(&self.snapshots) {
            let opt_usize = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
            let opt_f64 = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                removal.round,
                removal.node,
                removal.score,
                opt_usize(snap.lcc),
                opt_f64(snap.tf),
                opt_f64(snap.aspl),
                opt_f64(snap.eff),
                opt_f64(snap.anf),
            ));
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum AttackError {
    #[error("cannot attack an empty graph")]
    EmptyGraph,
    #[error("centrality computation failed in round {round}: {source}")]
    Centrality {
        round: usize,
        #[source]
        source: CentralityError,
    },
}

/// Runs the full adaptive attack: exactly n rounds on an n-node graph.
pub fn run_attack(g: &WeightedGraph, config: &AttackConfig) -> Result<AttackTrace, AttackError> {
    if g.is_empty() {
        return Err(AttackError::EmptyGraph);
    }
    let n = g.node_count();
    let mut current = g.clone();
    let initial = snapshot_selected(&current, 0, config.distance_mode, &config.metrics);
    let initial_edges = current.edge_count();
    let mut rng = match config.policy {
        TieBreakPolicy::SeededRandom(seed) => Some(Xoshiro256StarStar::seed_from_u64(seed)),
        TieBreakPolicy::LowestId => None,
    };
    let mut removals = Vec::with_capacity(n);
    let mut snapshots = Vec::with_capacity(n);

    for round in 1..=n {
        let scores = component_scores(&current, config.kind, config.distance_mode)
            .map_err(|source| AttackError::Centrality { round, source })?;
        let best = scores
            .values()
            .fold(f64::NEG_INFINITY, |acc, &s| acc.max(s));
        let candidates: Vec<NodeId> = scores
            .iter()
            .filter(|(_, &s)| ties_with_best(best, s))
            .map(|(&v, _)| v)
            .collect();
        let chosen = match rng.as_mut() {
            _ if candidates.len() == 1 => candidates[0],
            Some(rng) => candidates[rng.gen_index(candidates.len())],
            None => candidates[0],
        };
        removals.push(Removal {
            round,
            node: chosen,
            score: scores[&chosen],
            tied_candidates: candidates.len(),
        });
        current.remove_node(chosen).expect("chosen node is present");
        snapshots.push(snapshot_selected(
            &current,
            round,
            config.distance_mode,
            &config.metrics,
        ));
    }

    Ok(AttackTrace {
        kind: config.kind,
        policy: config.policy,
        distance_mode: config.distance_mode,
        initial,
        initial_edges,
        removals,
        snapshots,
    })
}

/// Centrality of every surviving node, each computed within its own
/// connected component.
fn component_scores(
    g: &WeightedGraph,
    kind: CentralityKind,
    mode: DistanceMode,
) -> Result<BTreeMap<NodeId, f64>, CentralityError> {
    let mut scores = BTreeMap::new();
    for component in g.connected_components() {
        let sub = g
            .induced_subgraph(component.members())
            .expect("component nodes exist");
        let vector = compute(kind, &sub, mode)?;
        scores.extend(vector.iter());
    }
    Ok(scores)
}

fn ties_with_best(best: f64, score: f64) -> bool {
    (best - score) <= TIE_TOLERANCE * best.abs().max(score.abs())
}

/// Scores a complete trace under one metric kind.
pub fn score_trace(trace: &AttackTrace, metric: MetricKind) -> Result<f64, RobustnessError> {
    attack_average(&trace.snapshots, &trace.initial, metric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robustness::MetricKind;

    const EPS: f64 = 1e-12;

    fn unit_path3() -> WeightedGraph {
        WeightedGraph::from_edges([(1, 2, 1.0), (2, 3, 1.0)]).unwrap()
    }

    fn unit_triangle() -> WeightedGraph {
        WeightedGraph::from_edges([(1, 2, 1.0), (2, 3, 1.0), (1, 3, 1.0)]).unwrap()
    }

    #[test]
    fn cfb_attack_on_path_removes_middle_then_lowest_ids() {
        let config = AttackConfig::new(CentralityKind::CfBetweenness);
        let trace = run_attack(&unit_path3(), &config).unwrap();
        let order: Vec<NodeId> = trace.removals.iter().map(|r| r.node).collect();
        assert_eq!(order, vec![2, 1, 3]);
        assert!((trace.removals[0].score - 1.0).abs() < EPS);
        assert_eq!(trace.removals[1].tied_candidates, 2);
    }

    #[test]
    fn strength_attack_on_star_removes_center_first() {
        let g = WeightedGraph::from_edges([(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (0, 4, 1.0)])
            .unwrap();
        let config = AttackConfig::new(CentralityKind::NodeStrength);
        let trace = run_attack(&g, &config).unwrap();
        assert_eq!(trace.removals[0].node, 0);
        assert_eq!(trace.removals[0].score, 4.0);
    }

    #[test]
    fn single_node_graph_yields_one_round() {
        let mut g = WeightedGraph::new();
        g.add_node(7);
        let config = AttackConfig::new(CentralityKind::CfCloseness);
        let trace = run_attack(&g, &config).unwrap();
        assert_eq!(trace.removals.len(), 1);
        assert_eq!(trace.removals[0].node, 7);
        assert_eq!(trace.snapshots[0].nodes, 0);
        assert_eq!(trace.snapshots[0].anf, Some(0.0));
    }

    #[test]
    fn empty_graph_is_an_error() {
        let config = AttackConfig::new(CentralityKind::NodeStrength);
        assert_eq!(
            run_attack(&WeightedGraph::new(), &config),
            Err(AttackError::EmptyGraph)
        );
    }

    #[test]
    fn every_node_removed_exactly_once() {
        let g = crate::generate::generate(&crate::generate::GeneratorSpec::new(
            crate::generate::GraphModel::ErdosRenyi,
            12,
            20,
            3,
        ))
        .unwrap();
        let config = AttackConfig::new(CentralityKind::SpBetweenness)
            .with_policy(TieBreakPolicy::SeededRandom(5));
        let trace = run_attack(&g, &config).unwrap();
        assert_eq!(trace.removals.len(), 12);
        let mut nodes: Vec<NodeId> = trace.removals.iter().map(|r| r.node).collect();
        nodes.sort_unstable();
        nodes.dedup();
        assert_eq!(nodes.len(), 12);
        let rounds: Vec<usize> = trace.removals.iter().map(|r| r.round).collect();
        assert_eq!(rounds, (1..=12).collect::<Vec<_>>());
    }

    #[test]
    fn seeded_runs_are_identical() {
        let g = unit_triangle();
        let config = AttackConfig::new(CentralityKind::NodeStrength)
            .with_policy(TieBreakPolicy::SeededRandom(42));
        let a = run_attack(&g, &config).unwrap();
        let b = run_attack(&g, &config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn triangle_trace_scores_one_sixth_ranf() {
        let config = AttackConfig::new(CentralityKind::NodeStrength);
        let trace = run_attack(&unit_triangle(), &config).unwrap();
        let score = score_trace(&trace, MetricKind::Anf).unwrap();
        assert!((score - 1.0 / 6.0).abs() < EPS);
    }

    #[test]
    fn path_middle_first_scores_two_ninths_r() {
        let config = AttackConfig::new(CentralityKind::CfBetweenness);
        let trace = run_attack(&unit_path3(), &config).unwrap();
        assert_eq!(trace.removals[0].node, 2);
        let score = score_trace(&trace, MetricKind::LccFraction).unwrap();
        assert!((score - 2.0 / 9.0).abs() < EPS);
    }

    #[test]
    fn edgeless_graph_ranf_baseline_is_degenerate() {
        let mut g = WeightedGraph::new();
        g.add_node(1);
        g.add_node(2);
        let config = AttackConfig::new(CentralityKind::NodeStrength);
        let trace = run_attack(&g, &config).unwrap();
        assert!(matches!(
            score_trace(&trace, MetricKind::Anf),
            Err(RobustnessError::DegenerateBaseline { .. })
        ));
    }

    #[test]
    fn trace_csv_has_fixed_header_and_row_per_round() {
        let config = AttackConfig::new(CentralityKind::NodeStrength)
            .with_metrics(MetricSelection::only([MetricKind::Anf]));
        let trace = run_attack(&unit_triangle(), &config).unwrap();
        let csv = trace.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "round,removed_node,centrality_value,lcc,tf,aspl,eff,anf"
        );
        assert_eq!(lines.len(), 4);
        // lcc/tf/aspl/eff columns are empty under an anf-only selection
        assert!(lines[1].contains(",,,,"));
    }

    #[test]
    fn removal_score_matches_recomputed_centrality() {
        let g = crate::generate::generate(&crate::generate::GeneratorSpec::new(
            crate::generate::GraphModel::WattsStrogatz,
            10,
            15,
            8,
        ))
        .unwrap();
        let config = AttackConfig::new(CentralityKind::NodeStrength);
        let trace = run_attack(&g, &config).unwrap();
        // Replay: recompute scores on the shrinking graph and verify the
        // removed node was maximal each round.
        let mut replay = g.clone();
        for removal in &trace.removals {
            let scores = component_scores(&replay, config.kind, config.distance_mode).unwrap();
            let best = scores.values().fold(f64::NEG_INFINITY, |a, &s| a.max(s));
            let removed_score = scores[&removal.node];
            assert!(ties_with_best(best, removed_score));
            assert!((removed_score - removal.score).abs() <= EPS * best.abs().max(1.0));
            replay.remove_node(removal.node).unwrap();
        }
    }
}
