//! Static SVG line charts of batch results: one chart per (model, metric),
//! one polyline per centrality, mean score against edge count (or node
//! count, when the group sweeps scale).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use flowattack::centrality::CentralityKind;
use flowattack::robustness::MetricKind;

use crate::batch::{ResultRow, ResultTable};

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("result table has no rows to plot")]
    EmptyTable,
    #[error("failed to write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 62.0;
const RIGHT: f64 = 500.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 372.0;

/// Fixed palette indexed by the canonical centrality order.
const COLORS: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

fn color_for(kind: CentralityKind) -> &'static str {
    let idx = CentralityKind::ALL.iter().position(|&k| k == kind).unwrap();
    COLORS[idx]
}

/// Renders every (model, metric) group of the table into `out_dir` as
/// `<model>_<metric>.svg`; returns the written paths in sorted order.
/// Groups with a single data point per series render as lone markers.
pub fn plot_results(table: &ResultTable, out_dir: &Path) -> Result<Vec<PathBuf>, PlotError> {
    if table.rows.is_empty() {
        return Err(PlotError::EmptyTable);
    }
    fs::create_dir_all(out_dir).map_err(|source| PlotError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let mut groups: BTreeMap<(String, MetricKind), Vec<&ResultRow>> = BTreeMap::new();
    for row in &table.rows {
        groups
            .entry((row.model.clone(), row.metric))
            .or_default()
            .push(row);
    }
    let mut written = Vec::new();
    for ((model, metric), rows) in &groups {
        let svg = render_chart(model, *metric, rows);
        let path = out_dir.join(format!("{}_{}.svg", sanitize(model), metric));
        fs::write(&path, svg).map_err(|source| PlotError::Io {
            path: path.display().to_string(),
            source,
        })?;
        written.push(path);
    }
    written.sort();
    Ok(written)
}

/// One standalone SVG chart for a single (model, metric) group.
pub fn render_chart(model: &str, metric: MetricKind, rows: &[&ResultRow]) -> String {
    // Sweep detection: varying n means a scale sweep plotted against n,
    // otherwise plot against m.
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let use_n = ns.len() > 1;
    let x_label = if use_n { "n" } else { "m" };
    let x_of = |r: &ResultRow| if use_n { r.n } else { r.m };

    let mut xs: Vec<usize> = rows.iter().map(|r| x_of(r)).collect();
    xs.sort_unstable();
    xs.dedup();
    let (x_min, x_max) = (xs[0] as f64, *xs.last().unwrap() as f64);
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let y_max = rows.iter().map(|r| r.mean).fold(1.0f64, f64::max) * 1.05;

    let px = |x: f64| LEFT + (x - x_min) / x_span * (RIGHT - LEFT);
    let py = |y: f64| BOTTOM - (y / y_max) * (BOTTOM - TOP);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
    ));
    svg.push_str(&format!(
        "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{}: mean {} vs {}</text>\n",
        (LEFT + RIGHT) / 2.0,
        escape(model),
        metric,
        x_label
    ));
    // Axes
    svg.push_str(&format!(
        "  <line x1=\"{LEFT}\" y1=\"{BOTTOM}\" x2=\"{RIGHT}\" y2=\"{BOTTOM}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "  <line x1=\"{LEFT}\" y1=\"{TOP}\" x2=\"{LEFT}\" y2=\"{BOTTOM}\" stroke=\"black\"/>\n"
    ));
    // X ticks at the data points.
    for &x in &xs {
        let cx = px(x as f64);
        svg.push_str(&format!(
            "  <line x1=\"{cx}\" y1=\"{BOTTOM}\" x2=\"{cx}\" y2=\"{}\" stroke=\"black\"/>\n",
            BOTTOM + 5.0
        ));
        svg.push_str(&format!(
            "  <text class=\"x-tick\" x=\"{cx}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{x}</text>\n",
            BOTTOM + 18.0
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{x_label}</text>\n",
        (LEFT + RIGHT) / 2.0,
        BOTTOM + 36.0
    ));
    // Y ticks: five even divisions of the range.
    for i in 0..=4 {
        let y = y_max * i as f64 / 4.0;
        let cy = py(y);
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{cy}\" x2=\"{LEFT}\" y2=\"{cy}\" stroke=\"black\"/>\n",
            LEFT - 5.0
        ));
        svg.push_str(&format!(
            "  <text class=\"y-tick\" x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.2}</text>\n",
            LEFT - 9.0,
            cy + 4.0,
            y
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"16\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {})\">mean {}</text>\n",
        (TOP + BOTTOM) / 2.0,
        (TOP + BOTTOM) / 2.0,
        metric
    ));

    // One polyline (plus point markers) per centrality present, canonical order.
    let mut legend_y = TOP + 10.0;
    for kind in CentralityKind::ALL {
        let mut points: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.centrality == kind)
            .map(|r| (x_of(r) as f64, r.mean))
            .collect();
        if points.is_empty() {
            continue;
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let color = color_for(kind);
        let path: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        svg.push_str(&format!(
            "  <polyline class=\"series-{kind}\" points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
            path.join(" ")
        ));
        for &(x, y) in &points {
            svg.push_str(&format!(
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>\n",
                px(x),
                py(y)
            ));
        }
        // Legend entry
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{legend_y}\" x2=\"{}\" y2=\"{legend_y}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            RIGHT + 14.0,
            RIGHT + 44.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\">{kind}</text>\n",
            RIGHT + 50.0,
            legend_y + 4.0
        ));
        legend_y += 20.0;
    }
    svg.push_str("</svg>\n");
    svg
}

fn sanitize(name: &str) -> String {
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

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
