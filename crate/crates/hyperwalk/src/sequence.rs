//! Sample-sequence files.
//!
//! A sequence file is a one-line JSON header (config echo, query stats,
//! truncation flag) followed by one line per step:
//!
//! ```text
//! k X_label Y_label d s
//! ```
//!
//! with `k` the 1-based step index, the node and hyperedge labels for the
//! k-th pair, and the degree and size observed at that step. Carrying `d`
//! and `s` lets estimators run from the file alone, without the hypergraph
//! or any further queries.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{EdgeId, NodeId};
use crate::oracle::{Oracle, QueryStats};
use crate::walk::{SampleSequence, Step, WalkConfig};

#[derive(Debug, Error)]
pub enum SequenceIoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("missing or malformed header: {0}")]
    BadHeader(String),
    #[error("malformed step on line {line}: {msg}")]
    BadStep { line: usize, msg: String },
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    #[serde(flatten)]
    config: WalkConfig,
    truncated: bool,
    node_queries: u64,
    hyperedge_queries: u64,
}

/// Writes a sequence with labels resolved through the oracle that ran it.
pub fn write_sequence(
    seq: &SampleSequence,
    oracle: &dyn Oracle,
    mut w: impl Write,
) -> Result<(), SequenceIoError> {
    let header = Header {
        config: seq.config.clone(),
        truncated: seq.truncated,
        node_queries: seq.stats.node_queries,
        hyperedge_queries: seq.stats.hyperedge_queries,
    };
    let header = serde_json::to_string(&header)
        .map_err(|e| SequenceIoError::BadHeader(e.to_string()))?;
    writeln!(w, "{header}")?;
    for (k, step) in seq.steps.iter().enumerate() {
        writeln!(
            w,
            "{} {} {} {} {}",
            k + 1,
            oracle.node_label(step.node),
            oracle.hyperedge_label(step.hyperedge),
            step.degree,
            step.size
        )?;
    }
    Ok(())
}

/// A sequence read back from a file; node and hyperedge ids are local intern
/// ids in label first-appearance order.
#[derive(Debug, Clone)]
pub struct LoadedSequence {
    pub seq: SampleSequence,
    node_labels: Vec<String>,
    edge_labels: Vec<String>,
    node_ids: HashMap<String, NodeId>,
    edge_ids: HashMap<String, EdgeId>,
}

impl LoadedSequence {
    pub fn node_label(&self, id: NodeId) -> Option<&str> {
        self.node_labels.get(id as usize).map(String::as_str)
    }

    pub fn edge_label(&self, id: EdgeId) -> Option<&str> {
        self.edge_labels.get(id as usize).map(String::as_str)
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.node_ids.get(label).copied()
    }

    pub fn edge_id(&self, label: &str) -> Option<EdgeId> {
        self.edge_ids.get(label).copied()
    }
}

pub fn read_sequence(r: impl BufRead) -> Result<LoadedSequence, SequenceIoError> {
    let mut lines = r.lines();
    let header_line = lines
        .next()
        .ok_or_else(|| SequenceIoError::BadHeader("empty file".into()))??;
    let header: Header = serde_json::from_str(&header_line)
        .map_err(|e| SequenceIoError::BadHeader(e.to_string()))?;

    let mut node_labels = Vec::new();
    let mut edge_labels = Vec::new();
    let mut node_ids: HashMap<String, NodeId> = HashMap::new();
    let mut edge_ids: HashMap<String, EdgeId> = HashMap::new();
    let mut steps = Vec::new();

    for (offset, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = offset + 2;
        let mut parts = line.split_whitespace();
        let bad = |msg: &str| SequenceIoError::BadStep {
            line: lineno,
            msg: msg.to_string(),
        };
        let k: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad("expected step index"))?;
        if k != steps.len() + 1 {
            return Err(bad(&format!("step index {k} out of order")));
        }
        let node_label = parts.next().ok_or_else(|| bad("expected node label"))?;
        let edge_label = parts.next().ok_or_else(|| bad("expected hyperedge label"))?;
        let degree: u32 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad("expected degree"))?;
        let size: u32 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad("expected size"))?;

        let node = *node_ids.entry(node_label.to_string()).or_insert_with(|| {
            node_labels.push(node_label.to_string());
            (node_labels.len() - 1) as NodeId
        });
        let hyperedge = *edge_ids.entry(edge_label.to_string()).or_insert_with(|| {
            edge_labels.push(edge_label.to_string());
            (edge_labels.len() - 1) as EdgeId
        });
        steps.push(Step {
            node,
            hyperedge,
            degree,
            size,
        });
    }

    Ok(LoadedSequence {
        seq: SampleSequence {
            steps,
            stats: QueryStats {
                node_queries: header.node_queries,
                hyperedge_queries: header.hyperedge_queries,
            },
            truncated: header.truncated,
            config: header.config,
        },
        node_labels,
        edge_labels,
        node_ids,
        edge_ids,
    })
}
