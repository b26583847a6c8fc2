//! Neighborhood-query access layer.
//!
//! Walkers never touch a [`Hypergraph`](crate::hypergraph::Hypergraph)
//! directly; all access goes through an [`Oracle`], which answers the two
//! query kinds (node -> incident hyperedges, hyperedge -> member nodes)
//! while counting every query, duplicates included. Wrappers add a hard
//! query budget and an optional memoizing cache.
//!
//! Answers come back in sorted id order for determinism, but callers must
//! not rely on any particular order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{EdgeId, Hypergraph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    Node,
    Hyperedge,
}

impl std::fmt::Display for QueryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QueryKind::Node => write!(f, "node"),
            QueryKind::Hyperedge => write!(f, "hyperedge"),
        }
    }
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("unknown hyperedge {0:?}")]
    UnknownHyperedge(String),
    #[error("{0} query budget exhausted")]
    BudgetExhausted(QueryKind),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Monotone query counters; duplicated queries count every time.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryStats {
    pub node_queries: u64,
    pub hyperedge_queries: u64,
}

/// Optional hard caps; a query that would exceed a limit fails before being
/// issued.
#[derive(Debug, Clone, Copy, Default)]
pub struct QueryBudget {
    pub max_node_queries: Option<u64>,
    pub max_hyperedge_queries: Option<u64>,
}

/// The only access path to a hypergraph during a walk.
pub trait Oracle {
    /// Returns the hyperedges incident to `i` and charges one node query.
    fn query_node(&mut self, i: NodeId) -> Result<Vec<EdgeId>, OracleError>;
    /// Returns the member nodes of `alpha` and charges one hyperedge query.
    fn query_hyperedge(&mut self, alpha: EdgeId) -> Result<Vec<NodeId>, OracleError>;
    /// Current counter values; does not reset.
    fn stats(&self) -> QueryStats;
    /// Maps an external label to this oracle's node id space (no query charge).
    fn resolve_node_label(&mut self, label: &str) -> Result<NodeId, OracleError>;
    fn node_label(&self, i: NodeId) -> String;
    fn hyperedge_label(&self, alpha: EdgeId) -> String;
}

impl<T: Oracle + ?Sized> Oracle for Box<T> {
    fn query_node(&mut self, i: NodeId) -> Result<Vec<EdgeId>, OracleError> {
        (**self).query_node(i)
    }

    fn query_hyperedge(&mut self, alpha: EdgeId) -> Result<Vec<NodeId>, OracleError> {
        (**self).query_hyperedge(alpha)
    }

    fn stats(&self) -> QueryStats {
        (**self).stats()
    }

    fn resolve_node_label(&mut self, label: &str) -> Result<NodeId, OracleError> {
        (**self).resolve_node_label(label)
    }

    fn node_label(&self, i: NodeId) -> String {
        (**self).node_label(i)
    }

    fn hyperedge_label(&self, alpha: EdgeId) -> String {
        (**self).hyperedge_label(alpha)
    }
}

/// Oracle over an in-memory hypergraph; answers are exactly the incidence
/// lists. Each walk owns one (counters are per instance) while the backing
/// hypergraph is shared read-only.
pub struct InMemoryOracle<'a> {
    h: &'a Hypergraph,
    stats: QueryStats,
}

impl<'a> InMemoryOracle<'a> {
    pub fn new(h: &'a Hypergraph) -> Self {
        Self {
            h,
            stats: QueryStats::default(),
        }
    }
}

impl Oracle for InMemoryOracle<'_> {
    fn query_node(&mut self, i: NodeId) -> Result<Vec<EdgeId>, OracleError> {
        let answer = self
            .h
            .incident_hyperedges(i)
            .ok_or_else(|| OracleError::UnknownNode(i.to_string()))?;
        self.stats.node_queries += 1;
        Ok(answer.to_vec())
    }

    fn query_hyperedge(&mut self, alpha: EdgeId) -> Result<Vec<NodeId>, OracleError> {
        let answer = self
            .h
            .hyperedge_members(alpha)
            .ok_or_else(|| OracleError::UnknownHyperedge(alpha.to_string()))?;
        self.stats.hyperedge_queries += 1;
        Ok(answer.to_vec())
    }

    fn stats(&self) -> QueryStats {
        self.stats
    }

    fn resolve_node_label(&mut self, label: &str) -> Result<NodeId, OracleError> {
        self.h
            .node_id(label)
            .ok_or_else(|| OracleError::UnknownNode(label.to_string()))
    }

    fn node_label(&self, i: NodeId) -> String {
        self.h
            .node_label(i)
            .map(str::to_string)
            .unwrap_or_else(|| i.to_string())
    }

    fn hyperedge_label(&self, alpha: EdgeId) -> String {
        alpha.to_string()
    }
}

/// Enforces a [`QueryBudget`] in front of another oracle. Under budget the
/// answers are bit-identical to the wrapped oracle's.
pub struct BudgetedOracle<O> {
    inner: O,
    budget: QueryBudget,
}

impl<O: Oracle> BudgetedOracle<O> {
    pub fn new(inner: O, budget: QueryBudget) -> Self {
        Self { inner, budget }
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: Oracle> Oracle for BudgetedOracle<O> {
    fn query_node(&mut self, i: NodeId) -> Result<Vec<EdgeId>, OracleError> {
        if let Some(max) = self.budget.max_node_queries {
            if self.inner.stats().node_queries >= max {
                return Err(OracleError::BudgetExhausted(QueryKind::Node));
            }
        }
        self.inner.query_node(i)
    }

    fn query_hyperedge(&mut self, alpha: EdgeId) -> Result<Vec<NodeId>, OracleError> {
        if let Some(max) = self.budget.max_hyperedge_queries {
            if self.inner.stats().hyperedge_queries >= max {
                return Err(OracleError::BudgetExhausted(QueryKind::Hyperedge));
            }
        }
        self.inner.query_hyperedge(alpha)
    }

    fn stats(&self) -> QueryStats {
        self.inner.stats()
    }

    fn resolve_node_label(&mut self, label: &str) -> Result<NodeId, OracleError> {
        self.inner.resolve_node_label(label)
    }

    fn node_label(&self, i: NodeId) -> String {
        self.inner.node_label(i)
    }

    fn hyperedge_label(&self, alpha: EdgeId) -> String {
        self.inner.hyperedge_label(alpha)
    }
}

/// Caches answers while still counting every access in the raw counters.
/// The wrapped oracle only sees cache misses, so `dedup_stats` reports the
/// deduplicated query counts.
pub struct MemoizingOracle<O> {
    inner: O,
    raw: QueryStats,
    node_cache: std::collections::HashMap<NodeId, Vec<EdgeId>>,
    edge_cache: std::collections::HashMap<EdgeId, Vec<NodeId>>,
}

impl<O: Oracle> MemoizingOracle<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            raw: QueryStats::default(),
            node_cache: std::collections::HashMap::new(),
            edge_cache: std::collections::HashMap::new(),
        }
    }

    /// Queries actually forwarded to the backend (duplicates removed).
    pub fn dedup_stats(&self) -> QueryStats {
        self.inner.stats()
    }
}

impl<O: Oracle> Oracle for MemoizingOracle<O> {
    fn query_node(&mut self, i: NodeId) -> Result<Vec<EdgeId>, OracleError> {
        self.raw.node_queries += 1;
        if let Some(hit) = self.node_cache.get(&i) {
            return Ok(hit.clone());
        }
        let answer = self.inner.query_node(i)?;
        self.node_cache.insert(i, answer.clone());
        Ok(answer)
    }

    fn query_hyperedge(&mut self, alpha: EdgeId) -> Result<Vec<NodeId>, OracleError> {
        self.raw.hyperedge_queries += 1;
        if let Some(hit) = self.edge_cache.get(&alpha) {
            return Ok(hit.clone());
        }
        let answer = self.inner.query_hyperedge(alpha)?;
        self.edge_cache.insert(alpha, answer.clone());
        Ok(answer)
    }

    fn stats(&self) -> QueryStats {
        self.raw
    }

    fn resolve_node_label(&mut self, label: &str) -> Result<NodeId, OracleError> {
        self.inner.resolve_node_label(label)
    }

    fn node_label(&self, i: NodeId) -> String {
        self.inner.node_label(i)
    }

    fn hyperedge_label(&self, alpha: EdgeId) -> String {
        self.inner.hyperedge_label(alpha)
    }
}
