//! Dataset ingestion: `u,v,capacity` edge lists and raw capacity-table
//! conversion.
//!
//! Edge-list node ids may be arbitrary non-negative integers; they are
//! remapped to dense ids 0..n-1 in ascending original order, and the
//! mapping is returned so traces can be related back to the source data.
//! Duplicate edges collapse by keeping the maximum capacity.

use std::fs;
use std::path::Path;

use thiserror::Error;

use flowattack::graph::{NodeId, WeightedGraph};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("edge list contains no data lines")]
    EmptyFile,
    #[error("line {line}: expected 'u,v,capacity', got '{content}'")]
    MalformedLine { line: usize, content: String },
    #[error("line {line}: capacity '{value}' must be a positive finite number")]
    InvalidCapacity { line: usize, value: String },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: u64 },
    #[error("line {line}: missing column {column}")]
    MissingColumn { line: usize, column: usize },
    #[error("voltage {0} must be positive")]
    InvalidVoltage(f64),
    #[error("cable count {0} must be at least 1")]
    InvalidCables(u64),
}

/// A parsed dataset: the dense-id graph plus the original id for each dense
/// id (index = dense id).
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedGraph {
    pub graph: WeightedGraph,
    pub original_ids: Vec<u64>,
}

impl LoadedGraph {
    /// The mapping as `original,assigned` CSV.
    pub fn mapping_csv(&self) -> String {
        let mut out = String::from("original,assigned\n");
        for (dense, original) in self.original_ids.iter().enumerate() {
            out.push_str(&format!("{original},{dense}\n"));
        }
        out
    }
}

/// Parses edge-list text: one `u,v,capacity` triple per line, blank lines
/// ignored.
pub fn parse_edge_list(text: &str) -> Result<LoadedGraph, IngestError> {
    let mut raw_edges: Vec<(u64, u64, f64)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 3 {
            return Err(IngestError::MalformedLine {
                line: line_no,
                content: trimmed.to_string(),
            });
        }
        let parse_id = |s: &str| -> Result<u64, IngestError> {
            s.trim()
                .parse::<u64>()
                .map_err(|_| IngestError::MalformedLine {
                    line: line_no,
                    content: trimmed.to_string(),
                })
        };
        let u = parse_id(fields[0])?;
        let v = parse_id(fields[1])?;
        let cap: f64 = fields[2]
            .trim()
            .parse()
            .map_err(|_| IngestError::InvalidCapacity {
                line: line_no,
                value: fields[2].trim().to_string(),
            })?;
        if cap <= 0.0 || !cap.is_finite() {
            return Err(IngestError::InvalidCapacity {
                line: line_no,
                value: fields[2].trim().to_string(),
            });
        }
        if u == v {
            return Err(IngestError::SelfLoop {
                line: line_no,
                node: u,
            });
        }
        raw_edges.push((u, v, cap));
    }
    if raw_edges.is_empty() {
        return Err(IngestError::EmptyFile);
    }
    let mut original_ids: Vec<u64> = raw_edges.iter().flat_map(|&(u, v, _)| [u, v]).collect();
    original_ids.sort_unstable();
    original_ids.dedup();
    let dense = |orig: u64| original_ids.binary_search(&orig).unwrap() as NodeId;
    let mut graph = WeightedGraph::new();
    for i in 0..original_ids.len() {
        graph.add_node(i as NodeId);
    }
    for (u, v, cap) in raw_edges {
        graph
            .add_edge(dense(u), dense(v), cap)
            .expect("validated edge");
    }
    Ok(LoadedGraph {
        graph,
        original_ids,
    })
}

/// Loads an edge list from disk.
pub fn load_edge_list(path: &Path) -> Result<LoadedGraph, IngestError> {
    let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_edge_list(&text)
}

/// Serializes a graph as `u,v,capacity` lines (ascending, LF endings).
/// Isolated nodes have no incident edges and are not representable.
pub fn write_edge_list(g: &WeightedGraph) -> String {
    let mut out = String::new();
    for (u, v, c) in g.edges() {
        out.push_str(&format!("{u},{v},{c}\n"));
    }
    out
}

/// Link capacity from a voltage rating and a cable count: their product.
pub fn convert_european_capacity(voltage: f64, cables: u64) -> Result<f64, IngestError> {
    if voltage <= 0.0 || !voltage.is_finite() {
        return Err(IngestError::InvalidVoltage(voltage));
    }
    if cables < 1 {
        return Err(IngestError::InvalidCables(cables));
    }
    Ok(voltage * cables as f64)
}

/// Column positions (0-based) in a raw capacity table.
#[derive(Debug, Clone)]
pub struct ColumnMap {
    pub u: usize,
    pub v: usize,
    pub voltage: usize,
    /// Absent for datasets that carry only a voltage rating; cable count
    /// defaults to 1 so the capacity is the voltage itself.
    pub cables: Option<usize>,
}

/// Converts a raw comma-separated capacity table to edge-list text, taking
/// capacity = voltage * cables per line.
pub fn convert_capacity_table(
    text: &str,
    columns: &ColumnMap,
    skip_header: bool,
) -> Result<String, IngestError> {
    let mut out = String::new();
    let mut wrote_any = false;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if skip_header && idx == 0 {
            continue;
        }
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        let field = |col: usize| -> Result<&str, IngestError> {
            fields
                .get(col)
                .map(|s| s.trim())
                .ok_or(IngestError::MissingColumn {
                    line: line_no,
                    column: col,
                })
        };
        let u: u64 = field(columns.u)?
            .parse()
            .map_err(|_| IngestError::MalformedLine {
                line: line_no,
                content: trimmed.to_string(),
            })?;
        let v: u64 = field(columns.v)?
            .parse()
            .map_err(|_| IngestError::MalformedLine {
                line: line_no,
                content: trimmed.to_string(),
            })?;
        let voltage: f64 =
            field(columns.voltage)?
                .parse()
                .map_err(|_| IngestError::InvalidCapacity {
                    line: line_no,
                    value: field(columns.voltage).unwrap_or_default().to_string(),
                })?;
        let cables: u64 = match columns.cables {
            Some(col) => field(col)?
                .parse()
                .map_err(|_| IngestError::MalformedLine {
                    line: line_no,
                    content: trimmed.to_string(),
                })?,
            None => 1,
        };
        let capacity = convert_european_capacity(voltage, cables)?;
        out.push_str(&format!("{u},{v},{capacity}\n"));
        wrote_any = true;
    }
    if !wrote_any {
        return Err(IngestError::EmptyFile);
    }
    Ok(out)
}
