//! Centrality-guided targeted node attacks on weighted undirected networks,
//! scored with flow-based robustness metrics.
//!
//! The crate is organized around a single graph substrate:
//!
//! - [`graph`] — weighted simple graph with node removal, components, and
//!   induced subgraphs
//! - [`rng`] — self-contained deterministic PRNG (SplitMix64 / xoshiro256**)
//! - [`generate`](mod@crate::generate) — ER, BA, and WS generators with exact (n, m) counts and
//!   random integer capacities
//! - [`flow`] — exact max flow, Gomory-Hu trees, and average network flow
//! - [`electrical`] — capacity-as-conductance potentials, effective
//!   resistance, node throughput
//! - [`paths`] — shortest-path distances under configurable edge-distance
//!   modes
//! - [`centrality`] — the six node-importance metrics and their dispatcher
//! - [`robustness`] — per-round metric snapshots and attack-averaged scores
//! - [`attack`] — the adaptive targeted-attack loop and its trace

pub mod attack;
pub mod centrality;
pub mod electrical;
pub mod flow;
pub mod generate;
pub mod graph;
pub mod paths;
pub mod rng;
pub mod robustness;

pub use attack::{run_attack, score_trace, AttackConfig, AttackError, AttackTrace, TieBreakPolicy};
pub use centrality::{compute, CentralityError, CentralityKind, CentralityVector};
pub use electrical::{
    effective_resistance, node_throughput, solve_unit_current, ElectricalError, PotentialSolution,
};
pub use flow::{anf, gomory_hu_tree, max_flow, FlowError, GomoryHuTree};
pub use generate::{
    assign_random_integer_weights, generate, GeneratorError, GeneratorSpec, GraphModel,
};
pub use graph::{Component, GraphError, NodeId, WeightedGraph};
pub use paths::DistanceMode;
pub use robustness::{
    attack_average, snapshot, MetricKind, MetricSelection, RobustnessError, RoundSnapshot,
};
