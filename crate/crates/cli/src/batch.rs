//! Batch experiment runner: seeded sweeps over (model, n, m) settings,
//! attacked under each requested centrality and scored under each requested
//! metric, aggregated into a deterministic CSV table.
//!
//! Every trial's topology, weight, and tie-break seeds are derived from the
//! master seed and the cell coordinates alone, so a table is byte-identical
//! across runs and thread counts: trials run in parallel but land in a
//! pre-indexed slot vector, and aggregation walks that vector in order.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use flowattack::attack::{run_attack, score_trace, AttackConfig, TieBreakPolicy};
use flowattack::centrality::CentralityKind;
use flowattack::generate::{assign_random_integer_weights, generate, GeneratorSpec, GraphModel};
use flowattack::graph::WeightedGraph;
use flowattack::paths::DistanceMode;
use flowattack::rng::derive_seed;
use flowattack::robustness::{MetricKind, MetricSelection};

// Seed stream labels; changing these changes every derived stream.
const STREAM_TOPOLOGY: u64 = 1;
const STREAM_WEIGHTS: u64 = 2;
const STREAM_TIES: u64 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum NetworkSource {
    /// Seeded generator settings, one batch cell per (model, n, m).
    Generated {
        settings: Vec<(GraphModel, usize, usize)>,
    },
    /// One fixed graph; trials differ only in their tie-break streams.
    Dataset { name: String, graph: WeightedGraph },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub source: NetworkSource,
    pub centralities: Vec<CentralityKind>,
    pub metrics: Vec<MetricKind>,
    pub trials: usize,
    pub master_seed: u64,
    pub distance_mode: DistanceMode,
    /// Inclusive integer range for generated capacities.
    pub weight_range: (i64, i64),
    pub ws_rewire_p: f64,
    /// Worker threads; 0 lets the runtime choose.
    pub jobs: usize,
}

impl ExperimentConfig {
    pub fn new(source: NetworkSource) -> Self {
        Self {
            source,
            centralities: CentralityKind::ALL.to_vec(),
            metrics: vec![MetricKind::Anf],
            trials: 1,
            master_seed: 0,
            distance_mode: DistanceMode::Reciprocal,
            weight_range: (1, 10),
            ws_rewire_p: 0.1,
            jobs: 0,
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.centralities.is_empty() {
            return Err(ConfigError::NoCentralities);
        }
        if self.metrics.is_empty() {
            return Err(ConfigError::NoMetrics);
        }
        if self.trials == 0 {
            return Err(ConfigError::ZeroTrials);
        }
        if let NetworkSource::Generated { settings } = &self.source {
            if settings.is_empty() {
                return Err(ConfigError::NoSettings);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("at least one centrality kind is required")]
    NoCentralities,
    #[error("at least one metric kind is required")]
    NoMetrics,
    #[error("at least one trial is required")]
    ZeroTrials,
    #[error("at least one (model, n, m) setting is required")]
    NoSettings,
}

/// One aggregated table row.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub model: String,
    pub n: usize,
    pub m: usize,
    pub centrality: CentralityKind,
    pub metric: MetricKind,
    pub mean: f64,
    pub stddev: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub const HEADER: &'static str = "model,n,m,centrality,metric,mean,stddev,trials";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                row.model,
                row.n,
                row.m,
                row.centrality,
                row.metric,
                row.mean,
                row.stddev,
                row.trials
            ));
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self, TableParseError> {
        let mut lines = text.lines();
        match lines.next() {
            Some(header) if header == Self::HEADER => {}
            other => {
                return Err(TableParseError::BadHeader(other.unwrap_or("").to_string()));
            }
        }
        let mut rows = Vec::new();
        for (idx, line) in lines.enumerate() {
            let line_no = idx + 2;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(TableParseError::BadRow {
                    line: line_no,
                    content: line.to_string(),
                });
            }
            macro_rules! field {
                ($idx:expr) => {
                    fields[$idx].parse().map_err(|_| TableParseError::BadRow {
                        line: line_no,
                        content: line.to_string(),
                    })?
                };
            }
            rows.push(ResultRow {
                model: fields[0].to_string(),
                n: field!(1),
                m: field!(2),
                centrality: field!(3),
                metric: field!(4),
                mean: field!(5),
                stddev: field!(6),
                trials: field!(7),
            });
        }
        Ok(Self { rows })
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TableParseError {
    #[error("expected header '{header}', got '{0}'", header = ResultTable::HEADER)]
    BadHeader(String),
    #[error("line {line}: cannot parse result row '{content}'")]
    BadRow { line: usize, content: String },
}

/// A cell that could not be aggregated; the batch records it and continues.
#[derive(Debug, Clone, PartialEq)]
pub struct RowFailure {
    pub model: String,
    pub n: usize,
    pub m: usize,
    pub centrality: Option<CentralityKind>,
    pub trial: usize,
    pub message: String,
}

impl fmt::Display for RowFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} n={} m={} trial={}{}: {}",
            self.model,
            self.n,
            self.m,
            self.trial,
            self.centrality
                .map(|k| format!(" centrality={k}"))
                .unwrap_or_default(),
            self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchOutcome {
    pub table: ResultTable,
    pub failures: Vec<RowFailure>,
}

struct Setting {
    model_label: String,
    model_tag: u64,
    n: usize,
    m: usize,
    generated: Option<(GraphModel, usize, usize)>,
}

enum TrialScores {
    SetupFailed(String),
    Ran(Vec<(CentralityKind, MetricKind, Result<f64, String>)>),
}

/// Runs the full sweep and aggregates per-(model, n, m, centrality, metric)
/// means and sample standard deviations over the trials.
pub fn run_batch(config: &ExperimentConfig) -> Result<BatchOutcome, ConfigError> {
    config.validate()?;
    let mut centralities = config.centralities.clone();
    centralities.sort_unstable();
    centralities.dedup();
    let mut metrics = config.metrics.clone();
    metrics.sort_unstable();
    metrics.dedup();

    let settings: Vec<Setting> = match &config.source {
        NetworkSource::Generated { settings } => settings
            .iter()
            .map(|&(model, n, m)| Setting {
                model_label: model.name().to_string(),
                model_tag: model as u64 + 1,
                n,
                m,
                generated: Some((model, n, m)),
            })
            .collect(),
        NetworkSource::Dataset { name, graph } => vec![Setting {
            model_label: sanitize_label(name),
            model_tag: 0,
            n: graph.node_count(),
            m: graph.edge_count(),
            generated: None,
        }],
    };

    let selection = MetricSelection::only(metrics.iter().copied());
    let tasks: Vec<(usize, usize)> = (0..settings.len())
        .flat_map(|s| (0..config.trials).map(move |t| (s, t)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .expect("thread pool construction");
    let outputs: Vec<TrialScores> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(setting_idx, trial)| {
                run_trial(
                    config,
                    &settings[setting_idx],
                    trial,
                    &centralities,
                    &metrics,
                    &selection,
                )
            })
            .collect()
    });

    // Aggregate in fixed (setting, centrality, metric) order.
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (setting_idx, setting) in settings.iter().enumerate() {
        let trial_outputs =
            &outputs[setting_idx * config.trials..(setting_idx + 1) * config.trials];
        for &kind in &centralities {
            for &metric in &metrics {
                let mut values = Vec::with_capacity(config.trials);
                let mut failed = false;
                for (trial, output) in trial_outputs.iter().enumerate() {
                    match output {
                        TrialScores::SetupFailed(message) => {
                            failures.push(RowFailure {
                                model: setting.model_label.clone(),
                                n: setting.n,
                                m: setting.m,
                                centrality: None,
                                trial,
                                message: message.clone(),
                            });
                            failed = true;
                            break;
                        }
                        TrialScores::Ran(scores) => {
                            let entry = scores
                                .iter()
                                .find(|(k, mk, _)| *k == kind && *mk == metric)
                                .expect("every cell is scored");
                            match &entry.2 {
                                Ok(value) => values.push(*value),
                                Err(message) => {
                                    failures.push(RowFailure {
                                        model: setting.model_label.clone(),
                                        n: setting.n,
                                        m: setting.m,
                                        centrality: Some(kind),
                                        trial,
                                        message: message.clone(),
                                    });
                                    failed = true;
                                    break;
                                }
                            }
                        }
                    }
                }
                if !failed {
                    let (mean, stddev) = mean_and_sample_stddev(&values);
                    rows.push(ResultRow {
                        model: setting.model_label.clone(),
                        n: setting.n,
                        m: setting.m,
                        centrality: kind,
                        metric,
                        mean,
                        stddev,
                        trials: values.len(),
                    });
                }
            }
        }
    }
    rows.sort_by(|a, b| {
        (&a.model, a.n, a.m, a.centrality, a.metric).cmp(&(
            &b.model,
            b.n,
            b.m,
            b.centrality,
            b.metric,
        ))
    });
    Ok(BatchOutcome {
        table: ResultTable { rows },
        failures,
    })
}

fn run_trial(
    config: &ExperimentConfig,
    setting: &Setting,
    trial: usize,
    centralities: &[CentralityKind],
    metrics: &[MetricKind],
    selection: &MetricSelection,
) -> TrialScores {
    let coords = [
        setting.model_tag,
        setting.n as u64,
        setting.m as u64,
        trial as u64,
    ];
    let labels = |stream: u64| {
        let mut v = vec![stream];
        v.extend_from_slice(&coords);
        v
    };
    let graph: WeightedGraph = match &config.source {
        NetworkSource::Dataset { graph, .. } => graph.clone(),
        NetworkSource::Generated { .. } => {
            let (model, n, m) = setting.generated.expect("generated setting");
            let spec = GeneratorSpec {
                model,
                nodes: n,
                edges: m,
                ws_rewire_p: config.ws_rewire_p,
                require_connected: true,
                seed: derive_seed(config.master_seed, &labels(STREAM_TOPOLOGY)),
            };
            let topology = match generate(&spec) {
                Ok(g) => g,
                Err(e) => return TrialScores::SetupFailed(e.to_string()),
            };
            let (lo, hi) = config.weight_range;
            match assign_random_integer_weights(
                &topology,
                lo,
                hi,
                derive_seed(config.master_seed, &labels(STREAM_WEIGHTS)),
            ) {
                Ok(g) => g,
                Err(e) => return TrialScores::SetupFailed(e.to_string()),
            }
        }
    };

    let mut scores = Vec::with_capacity(centralities.len() * metrics.len());
    for (kind_idx, &kind) in centralities.iter().enumerate() {
        let mut tie_labels = labels(STREAM_TIES);
        tie_labels.push(kind_idx as u64);
        let attack_config = AttackConfig::new(kind)
            .with_policy(TieBreakPolicy::SeededRandom(derive_seed(
                config.master_seed,
                &tie_labels,
            )))
            .with_distance_mode(config.distance_mode)
            .with_metrics(selection.clone());
        match run_attack(&graph, &attack_config) {
            Ok(trace) => {
                for &metric in metrics {
                    let value = score_trace(&trace, metric).map_err(|e| e.to_string());
                    scores.push((kind, metric, value));
                }
            }
            Err(e) => {
                let message = e.to_string();
                for &metric in metrics {
                    scores.push((kind, metric, Err(message.clone())));
                }
            }
        }
    }
    TrialScores::Ran(scores)
}

fn mean_and_sample_stddev(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var =
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (values.len() - 1) as f64;
    (mean, var.sqrt())
}

/// Dataset names land in the CSV model column; anything outside
/// [A-Za-z0-9_.-] becomes '_' so the frozen dialect never needs quoting.
fn sanitize_label(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "._-".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ExperimentConfig {
        let mut config = ExperimentConfig::new(NetworkSource::Generated {
            settings: vec![(GraphModel::ErdosRenyi, 12, 20)],
        });
        config.centralities = vec![CentralityKind::NodeStrength, CentralityKind::CfBetweenness];
        config.metrics = vec![MetricKind::Anf];
        config.trials = 3;
        config.master_seed = 7;
        config
    }

    #[test]
    fn tiny_batch_produces_expected_rows_in_range() {
        let outcome = run_batch(&tiny_config()).unwrap();
        assert!(outcome.failures.is_empty());
        assert_eq!(outcome.table.rows.len(), 2);
        for row in &outcome.table.rows {
            assert_eq!(row.trials, 3);
            assert!((0.0..=1.0).contains(&row.mean), "{row:?}");
            assert!(row.stddev >= 0.0);
        }
    }

    #[test]
    fn same_master_seed_gives_identical_csv_bytes() {
        let a = run_batch(&tiny_config()).unwrap();
        let b = run_batch(&tiny_config()).unwrap();
        assert_eq!(a.table.to_csv(), b.table.to_csv());
    }

    #[test]
    fn thread_count_does_not_change_output_bytes() {
        let mut serial = tiny_config();
        serial.jobs = 1;
        let mut parallel = tiny_config();
        parallel.jobs = 4;
        let a = run_batch(&serial).unwrap();
        let b = run_batch(&parallel).unwrap();
        assert_eq!(a.table.to_csv(), b.table.to_csv());
    }

    #[test]
    fn different_seed_changes_results() {
        let a = run_batch(&tiny_config()).unwrap();
        let mut other = tiny_config();
        other.master_seed = 8;
        let b = run_batch(&other).unwrap();
        assert_ne!(a.table.to_csv(), b.table.to_csv());
    }

    #[test]
    fn dataset_source_uses_graph_dimensions() {
        let graph = flowattack::graph::WeightedGraph::from_edges([
            (0, 1, 2.0),
            (1, 2, 3.0),
            (0, 2, 1.0),
            (2, 3, 4.0),
        ])
        .unwrap();
        let mut config = ExperimentConfig::new(NetworkSource::Dataset {
            name: "toy grid.csv".to_string(),
            graph,
        });
        config.centralities = vec![CentralityKind::CfCloseness];
        config.metrics = vec![MetricKind::Anf, MetricKind::LccFraction];
        config.trials = 2;
        let outcome = run_batch(&config).unwrap();
        assert_eq!(outcome.table.rows.len(), 2);
        let row = &outcome.table.rows[0];
        assert_eq!(row.model, "toy_grid.csv");
        assert_eq!(row.n, 4);
        assert_eq!(row.m, 4);
    }

    #[test]
    fn bounded_metric_means_stay_in_unit_interval() {
        let mut config = ExperimentConfig::new(NetworkSource::Generated {
            settings: vec![
                (GraphModel::ErdosRenyi, 14, 24),
                (GraphModel::BarabasiAlbert, 14, 24),
            ],
        });
        config.centralities = vec![CentralityKind::SpBetweenness, CentralityKind::CfBetweenness];
        config.metrics = vec![
            MetricKind::LccFraction,
            MetricKind::TotalFlow,
            MetricKind::Efficiency,
            MetricKind::Anf,
        ];
        config.trials = 4;
        config.master_seed = 21;
        let outcome = run_batch(&config).unwrap();
        assert!(outcome.failures.is_empty());
        assert_eq!(outcome.table.rows.len(), 16);
        for row in &outcome.table.rows {
            assert!(
                (0.0..=1.0).contains(&row.mean),
                "{} {} mean {}",
                row.centrality,
                row.metric,
                row.mean
            );
        }
    }

    #[test]
    fn infeasible_setting_is_recorded_and_batch_continues() {
        let mut config = tiny_config();
        config.source = NetworkSource::Generated {
            settings: vec![
                (GraphModel::ErdosRenyi, 12, 20),
                (GraphModel::ErdosRenyi, 4, 100), // infeasible
            ],
        };
        let outcome = run_batch(&config).unwrap();
        assert!(!outcome.failures.is_empty());
        // feasible setting still aggregated
        assert_eq!(outcome.table.rows.len(), 2);
        assert!(outcome.failures.iter().all(|f| f.n == 4 && f.m == 100));
    }

    #[test]
    fn config_validation_errors() {
        let mut config = tiny_config();
        config.centralities.clear();
        assert_eq!(run_batch(&config), Err(ConfigError::NoCentralities));
        let mut config = tiny_config();
        config.metrics.clear();
        assert_eq!(run_batch(&config), Err(ConfigError::NoMetrics));
        let mut config = tiny_config();
        config.trials = 0;
        assert_eq!(run_batch(&config), Err(ConfigError::ZeroTrials));
        let mut config = tiny_config();
        config.source = NetworkSource::Generated { settings: vec![] };
        assert_eq!(run_batch(&config), Err(ConfigError::NoSettings));
    }

    #[test]
    fn csv_round_trips_through_parse() {
        let outcome = run_batch(&tiny_config()).unwrap();
        let text = outcome.table.to_csv();
        let parsed = ResultTable::parse_csv(&text).unwrap();
        assert_eq!(parsed, outcome.table);
    }

    #[test]
    fn csv_parse_rejects_bad_input() {
        assert!(matches!(
            ResultTable::parse_csv("nope\n"),
            Err(TableParseError::BadHeader(_))
        ));
        let text = format!("{}\ner,10\n", ResultTable::HEADER);
        assert!(matches!(
            ResultTable::parse_csv(&text),
            Err(TableParseError::BadRow { line: 2, .. })
        ));
    }
}
