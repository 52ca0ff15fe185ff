//! End-to-end checks of the installed binary: generate, attack, batch,
//! plot, convert, and the error paths that must exit nonzero.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

static NONCE: AtomicU64 = AtomicU64::new(0);

fn scratch_dir() -> PathBuf {
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_nanos());
    let dir = std::env::temp_dir().join(format!(
        "flowattack_cli_{}_{}_{}",
        std::process::id(),
        stamp,
        NONCE.fetch_add(1, Ordering::Relaxed)
    ));
    fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

fn flowattack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowattack"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn generate_attack_batch_plot_pipeline() {
    let dir = scratch_dir();
    let edges = dir.join("net.csv");
    let edges_str = edges.to_str().unwrap();

    let out = flowattack(&[
        "generate",
        "--model",
        "er",
        "--nodes",
        "20",
        "--edges",
        "40",
        "--seed",
        "5",
        "--connected",
        "--out",
        edges_str,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&edges).unwrap();
    assert_eq!(text.lines().count(), 40);

    let trace = dir.join("trace.csv");
    let out = flowattack(&[
        "attack",
        "--input",
        edges_str,
        "--centrality",
        "cfb",
        "--metrics",
        "ranf,r",
        "--policy",
        "lowest-id",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("metric,score\n"));
    assert!(stdout.contains("ranf,"));
    assert!(stdout.contains("r,"));
    let trace_text = fs::read_to_string(&trace).unwrap();
    assert!(trace_text.starts_with("round,removed_node,centrality_value,lcc,tf,aspl,eff,anf\n"));
    assert_eq!(trace_text.lines().count(), 21);

    let table = dir.join("results.csv");
    let out = flowattack(&[
        "batch",
        "--models",
        "er",
        "--n-list",
        "12",
        "--m-list",
        "18,24",
        "--centralities",
        "ns,cfb",
        "--metrics",
        "ranf",
        "--trials",
        "2",
        "--seed",
        "9",
        "--out",
        table.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table_text = fs::read_to_string(&table).unwrap();
    assert!(table_text.starts_with("model,n,m,centrality,metric,mean,stddev,trials\n"));
    assert_eq!(table_text.lines().count(), 5, "{table_text}");

    let plots = dir.join("plots");
    let out = flowattack(&[
        "plot",
        "--table",
        table.to_str().unwrap(),
        "--out-dir",
        plots.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let svg = fs::read_to_string(plots.join("er_ranf.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);

    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn attack_on_generated_target_reports_scores() {
    let out = flowattack(&[
        "attack",
        "--model",
        "ws",
        "--nodes",
        "14",
        "--edges",
        "21",
        "--seed",
        "3",
        "--centrality",
        "ns",
        "--metrics",
        "ranf,tf,eff",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 4);
}

#[test]
fn convert_produces_edge_list_consumable_by_attack() {
    let dir = scratch_dir();
    let raw = dir.join("raw.csv");
    fs::write(&raw, "from,to,kv,cables\n1,2,220,2\n2,3,380,1\n3,1,500,9\n").unwrap();
    let edges = dir.join("edges.csv");
    let out = flowattack(&[
        "convert",
        "--input",
        raw.to_str().unwrap(),
        "--output",
        edges.to_str().unwrap(),
        "--u-col",
        "0",
        "--v-col",
        "1",
        "--voltage-col",
        "2",
        "--cables-col",
        "3",
        "--skip-header",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        fs::read_to_string(&edges).unwrap(),
        "1,2,440\n2,3,380\n3,1,4500\n"
    );

    let nodemap = dir.join("nodes.csv");
    let out = flowattack(&[
        "attack",
        "--input",
        edges.to_str().unwrap(),
        "--centrality",
        "spc",
        "--nodemap",
        nodemap.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        fs::read_to_string(&nodemap).unwrap(),
        "original,assigned\n1,0\n2,1\n3,2\n"
    );
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn pair_nm_zips_scale_sweeps() {
    let out = flowattack(&[
        "batch",
        "--models",
        "er",
        "--pair-nm",
        "--n-list",
        "10,12",
        "--m-list",
        "15,18",
        "--centralities",
        "ns",
        "--metrics",
        "ranf",
        "--trials",
        "1",
        "--seed",
        "2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = stdout.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("er,10,15,"));
    assert!(rows[1].starts_with("er,12,18,"));

    let out = flowattack(&[
        "batch",
        "--models",
        "er",
        "--pair-nm",
        "--n-list",
        "10,12",
        "--m-list",
        "15",
        "--centralities",
        "ns",
        "--metrics",
        "ranf",
        "--trials",
        "1",
        "--seed",
        "2",
    ]);
    assert!(!out.status.success(), "mismatched list lengths must fail");
}

#[test]
fn malformed_dataset_exits_nonzero_with_line_number() {
    let dir = scratch_dir();
    let bad = dir.join("bad.csv");
    fs::write(&bad, "1,2,1\n1,2\n").unwrap();
    let out = flowattack(&[
        "attack",
        "--input",
        bad.to_str().unwrap(),
        "--centrality",
        "ns",
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "{stderr}");
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn infeasible_batch_setting_exits_nonzero_but_writes_table() {
    let dir = scratch_dir();
    let table = dir.join("results.csv");
    let out = flowattack(&[
        "batch",
        "--models",
        "er",
        "--n-list",
        "10",
        "--m-list",
        "18,1000",
        "--centralities",
        "ns",
        "--metrics",
        "ranf",
        "--trials",
        "1",
        "--seed",
        "1",
        "--out",
        table.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let text = fs::read_to_string(&table).unwrap();
    assert_eq!(
        text.lines().count(),
        2,
        "feasible setting still present: {text}"
    );
    fs::remove_dir_all(&dir).unwrap();
}
