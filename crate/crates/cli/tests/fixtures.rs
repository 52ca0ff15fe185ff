//! The shipped synthetic fixtures stay loadable and attackable.

use std::path::PathBuf;

use flowattack::attack::{run_attack, score_trace, AttackConfig};
use flowattack::centrality::CentralityKind;
use flowattack::robustness::MetricKind;
use flowattack_cli::ingest::{convert_capacity_table, load_edge_list, parse_edge_list, ColumnMap};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

#[test]
fn toy_grid_loads_and_survives_an_attack_run() {
    let loaded = load_edge_list(&fixture("toy_grid.csv")).unwrap();
    assert_eq!(loaded.graph.node_count(), 19);
    assert_eq!(loaded.graph.edge_count(), 20);
    assert!(loaded.graph.is_connected());
    // Original ids 100..122 map to dense 0..22.
    assert_eq!(loaded.original_ids[0], 100);
    assert_eq!(*loaded.original_ids.last().unwrap(), 122);

    let config = AttackConfig::new(CentralityKind::CfBetweenness);
    let trace = run_attack(&loaded.graph, &config).unwrap();
    let score = score_trace(&trace, MetricKind::Anf).unwrap();
    assert!((0.0..=1.0).contains(&score));
}

#[test]
fn toy_raw_table_converts_to_a_loadable_edge_list() {
    let raw = std::fs::read_to_string(fixture("toy_raw.csv")).unwrap();
    let columns = ColumnMap {
        u: 1,
        v: 2,
        voltage: 3,
        cables: Some(4),
    };
    let edges = convert_capacity_table(&raw, &columns, true).unwrap();
    assert!(
        edges.contains("100,104,4500\n"),
        "500 kV x 9 cables: {edges}"
    );
    let loaded = parse_edge_list(&edges).unwrap();
    assert_eq!(loaded.graph.node_count(), 6);
    assert_eq!(loaded.graph.edge_count(), 8);
}
