//! Attack-effectiveness metrics: per-round snapshots of the shrinking graph
//! and their attack-averaged scores.
//!
//! The averaged form follows one template: each round's value is divided by
//! the initial graph's value and the ratios are averaged over all n rounds.
//! The LCC variant divides by the initial node count instead, since the
//! classic R metric normalizes the component size against the network size.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::flow::anf;
use crate::graph::WeightedGraph;
use crate::paths::{shortest_path_distances, DistanceMode};

/// The five attack-averaged metric kinds, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetricKind {
    /// R: averaged largest-component fraction.
    LccFraction,
    /// Averaged total link capacity ratio.
    TotalFlow,
    /// Averaged shortest-path-length ratio (connected pairs only).
    Aspl,
    /// Averaged network-efficiency ratio.
    Efficiency,
    /// Averaged network-flow ratio.
    Anf,
}

impl MetricKind {
    pub const ALL: [MetricKind; 5] = [
        MetricKind::LccFraction,
        MetricKind::TotalFlow,
        MetricKind::Aspl,
        MetricKind::Efficiency,
        MetricKind::Anf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::LccFraction => "r",
            MetricKind::TotalFlow => "tf",
            MetricKind::Aspl => "aspl",
            MetricKind::Efficiency => "eff",
            MetricKind::Anf => "ranf",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "r" => Ok(MetricKind::LccFraction),
            "tf" => Ok(MetricKind::TotalFlow),
            "aspl" => Ok(MetricKind::Aspl),
            "eff" => Ok(MetricKind::Efficiency),
            "ranf" => Ok(MetricKind::Anf),
            other => Err(format!(
                "unknown metric '{other}' (expected one of r, tf, aspl, eff, ranf)"
            )),
        }
    }
}

/// Which per-round quantities a snapshot should populate. Computing ANF or
/// path metrics every round dominates attack cost, so callers ask only for
/// what they score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSelection {
    wanted: BTreeSet<MetricKind>,
}

impl MetricSelection {
    pub fn all() -> Self {
        Self {
            wanted: MetricKind::ALL.into_iter().collect(),
        }
    }

    pub fn only<I: IntoIterator<Item = MetricKind>>(kinds: I) -> Self {
        Self {
            wanted: kinds.into_iter().collect(),
        }
    }

    pub fn contains(&self, kind: MetricKind) -> bool {
        self.wanted.contains(&kind)
    }

    pub fn iter(&self) -> impl Iterator<Item = MetricKind> + '_ {
        self.wanted.iter().copied()
    }
}

impl Default for MetricSelection {
    fn default() -> Self {
        Self::all()
    }
}

/// State of the graph after one attack round (round 0 is the initial graph).
/// Fields are None when the round was snapshotted with a narrower
/// [`MetricSelection`].
#[derive(Debug, Clone, PartialEq)]
pub struct RoundSnapshot {
    pub round: usize,
    pub nodes: usize,
    pub lcc: Option<usize>,
    pub tf: Option<f64>,
    pub aspl: Option<f64>,
    pub eff: Option<f64>,
    pub anf: Option<f64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum RobustnessError {
    #[error("no snapshots to average")]
    EmptyTrace,
    #[error("{rounds} snapshots do not cover the {nodes} rounds of an {nodes}-node attack")]
    TraceLengthMismatch { rounds: usize, nodes: usize },
    #[error("snapshot of round {round} does not carry the {kind} quantity")]
    MetricNotRecorded { kind: MetricKind, round: usize },
    #[error("initial graph has degenerate baseline {value} for {kind}; ratio is undefined")]
    DegenerateBaseline { kind: MetricKind, value: f64 },
}

/// Computes all five per-round quantities on `g`.
pub fn snapshot(g: &WeightedGraph, round: usize, mode: DistanceMode) -> RoundSnapshot {
    snapshot_selected(g, round, mode, &MetricSelection::all())
}

/// Computes only the selected per-round quantities on `g`.
///
/// ASPL averages over connected pairs only (0 when no pair is connected);
/// EFF counts disconnected pairs as contributing zero reciprocal distance;
/// both are 0 alongside ANF when the graph has fewer than two nodes.
pub fn snapshot_selected(
    g: &WeightedGraph,
    round: usize,
    mode: DistanceMode,
    selection: &MetricSelection,
) -> RoundSnapshot {
    let n = g.node_count();
    let lcc = selection
        .contains(MetricKind::LccFraction)
        .then(|| g.largest_component_size());
    let tf = selection
        .contains(MetricKind::TotalFlow)
        .then(|| g.total_capacity());
    let want_paths =
        selection.contains(MetricKind::Aspl) || selection.contains(MetricKind::Efficiency);
    let (mut aspl, mut eff) = (None, None);
    if want_paths {
        let (a, e) = path_metrics(g, mode);
        aspl = selection.contains(MetricKind::Aspl).then_some(a);
        eff = selection.contains(MetricKind::Efficiency).then_some(e);
    }
    let anf_value = selection.contains(MetricKind::Anf).then(|| anf(g));
    RoundSnapshot {
        round,
        nodes: n,
        lcc,
        tf,
        aspl,
        eff,
        anf: anf_value,
    }
}

/// (ASPL over connected pairs, EFF over all pairs) in one Dijkstra sweep.
fn path_metrics(g: &WeightedGraph, mode: DistanceMode) -> (f64, f64) {
    let n = g.node_count();
    if n < 2 {
        return (0.0, 0.0);
    }
    let mut distance_sum = 0.0;
    let mut reciprocal_sum = 0.0;
    let mut connected_pairs = 0usize;
    for v in g.nodes() {
        let dist = shortest_path_distances(g, v, mode);
        for (&u, &d) in dist.range((std::ops::Bound::Excluded(v), std::ops::Bound::Unbounded)) {
            debug_assert!(u > v);
            distance_sum += d;
            reciprocal_sum += 1.0 / d;
            connected_pairs += 1;
        }
    }
    let aspl = if connected_pairs == 0 {
        0.0
    } else {
        distance_sum / connected_pairs as f64
    };
    let eff = reciprocal_sum / (n * (n - 1) / 2) as f64;
    (aspl, eff)
}

/// Averages one metric over a complete attack trace, normalizing each round
/// against the initial graph per the template.
pub fn attack_average(
    snapshots: &[RoundSnapshot],
    base: &RoundSnapshot,
    kind: MetricKind,
) -> Result<f64, RobustnessError> {
    if snapshots.is_empty() {
        return Err(RobustnessError::EmptyTrace);
    }
    if snapshots.len() != base.nodes {
        return Err(RobustnessError::TraceLengthMismatch {
            rounds: snapshots.len(),
            nodes: base.nodes,
        });
    }
    let rounds = snapshots.len() as f64;
    let ratio_sum = match kind {
        MetricKind::LccFraction => {
            let n = base.nodes as f64;
            let mut sum = 0.0;
            for snap in snapshots {
                let lcc = snap.lcc.ok_or(RobustnessError::MetricNotRecorded {
                    kind,
                    round: snap.round,
                })? as f64;
                sum += lcc / n;
            }
            sum
        }
        _ => {
            let field = |snap: &RoundSnapshot| match kind {
                MetricKind::TotalFlow => snap.tf,
                MetricKind::Aspl => snap.aspl,
                MetricKind::Efficiency => snap.eff,
                MetricKind::Anf => snap.anf,
                MetricKind::LccFraction => unreachable!(),
            };
            let baseline = field(base).ok_or(RobustnessError::MetricNotRecorded {
                kind,
                round: base.round,
            })?;
            if baseline <= 0.0 {
                return Err(RobustnessError::DegenerateBaseline {
                    kind,
                    value: baseline,
                });
            }
            let mut sum = 0.0;
            for snap in snapshots {
                let value = field(snap).ok_or(RobustnessError::MetricNotRecorded {
                    kind,
                    round: snap.round,
                })?;
                sum += value / baseline;
            }
            sum
        }
    };
    Ok(ratio_sum / rounds)
}
