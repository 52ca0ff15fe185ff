//! Experiment front end for the attack library: dataset ingestion, batch
//! sweeps, result tables, and SVG charts.

pub mod batch;
pub mod ingest;
pub mod plot;

pub use batch::{
    run_batch, BatchOutcome, ConfigError, ExperimentConfig, NetworkSource, ResultRow, ResultTable,
};
pub use ingest::{
    convert_capacity_table, convert_european_capacity, load_edge_list, parse_edge_list,
    write_edge_list, ColumnMap, IngestError, LoadedGraph,
};
pub use plot::{plot_results, render_chart, PlotError};
