//! Dataset loaders for the two common hypergraph file conventions.
//!
//! Format (a), "hyperedge list": one hyperedge per line, member node labels
//! separated by whitespace. Blank lines and lines starting with `#` are
//! skipped. This is also the canonical output format of
//! [`Hypergraph::export`].
//!
//! Format (b), "sizes + members" pair: a sizes file whose k-th entry is the
//! cardinality of hyperedge k, and a members file listing all member labels
//! flattened in order. Tokens may be separated by any whitespace, so the
//! one-number-per-line layout used by published corpora parses unchanged.

use std::fs;
use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::hypergraph::{BuildError, Hypergraph};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("sizes file entry {index} ({token:?}) is not a positive integer")]
    BadSize { index: usize, token: String },
    #[error("members file has {found} labels but sizes sum to {expected}")]
    MemberCountMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Parses hyperedge-list text (format a).
pub fn parse_edge_list(text: &str) -> Result<Hypergraph, LoadError> {
    let edges: Vec<Vec<String>> = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect();
    Ok(Hypergraph::build(&edges)?)
}

/// Loads a hyperedge-list file (format a).
pub fn load_edge_list(path: &Path) -> Result<Hypergraph, LoadError> {
    parse_edge_list(&fs::read_to_string(path)?)
}

/// Parses the two-file convention (format b) from in-memory text.
pub fn parse_size_member_pair(sizes: &str, members: &str) -> Result<Hypergraph, LoadError> {
    let sizes: Vec<usize> = sizes
        .split_whitespace()
        .enumerate()
        .map(|(index, token)| {
            token.parse::<usize>().ok().filter(|&s| s > 0).ok_or(LoadError::BadSize {
                index,
                token: token.to_string(),
            })
        })
        .collect::<Result<_, _>>()?;
    let labels: Vec<&str> = members.split_whitespace().collect();
    let expected: usize = sizes.iter().sum();
    if labels.len() != expected {
        return Err(LoadError::MemberCountMismatch {
            expected,
            found: labels.len(),
        });
    }
    let mut edges: Vec<Vec<String>> = Vec::with_capacity(sizes.len());
    let mut offset = 0;
    for s in sizes {
        edges.push(labels[offset..offset + s].iter().map(|l| l.to_string()).collect());
        offset += s;
    }
    Ok(Hypergraph::build(&edges)?)
}

/// Loads the two-file convention (format b).
pub fn load_size_member_pair(sizes_path: &Path, members_path: &Path) -> Result<Hypergraph, LoadError> {
    parse_size_member_pair(
        &fs::read_to_string(sizes_path)?,
        &fs::read_to_string(members_path)?,
    )
}

/// Writes the canonical hyperedge-list form (format a).
pub fn write_edge_list(h: &Hypergraph, path: &Path) -> Result<(), LoadError> {
    let mut f = fs::File::create(path)?;
    f.write_all(h.export().as_bytes())?;
    Ok(())
}

/// Renders the two-file convention (format b): one size per line, one
/// member label per line, hyperedges in id order.
pub fn render_size_member_pair(h: &Hypergraph) -> (String, String) {
    let mut sizes = String::new();
    let mut members = String::new();
    for alpha in 0..h.hyperedge_count() as u32 {
        let edge = h.hyperedge_members(alpha).expect("id in range");
        sizes.push_str(&format!("{}\n", edge.len()));
        for &i in edge {
            members.push_str(h.node_label(i).expect("id in range"));
            members.push('\n');
        }
    }
    (sizes, members)
}

/// Writes the two-file convention (format b).
pub fn write_size_member_pair(
    h: &Hypergraph,
    sizes_path: &Path,
    members_path: &Path,
) -> Result<(), LoadError> {
    let (sizes, members) = render_size_member_pair(h);
    fs::write(sizes_path, sizes)?;
    fs::write(members_path, members)?;
    Ok(())
}
