//! Random walks that sample nodes and hyperedges simultaneously.
//!
//! All four walks follow the same skeleton: at step `k` the walker at node
//! `X_k` queries it, selects an incident hyperedge `Y_k`, queries that
//! hyperedge, and moves to a uniformly chosen member other than `X_k`. The
//! walks differ only in how `Y_k` is selected:
//!
//! * `p-rw` picks hyperedges with weight `s - 1` (the walk on the projected
//!   graph),
//! * `c-rw` with weight `(s - 1)^2`,
//! * `ho-rw` uniformly,
//! * `nb-ho-rw` uniformly among hyperedges other than `Y_{k-1}`, falling
//!   back to `Y_{k-1}` only at degree-1 nodes where backtracking is
//!   unavoidable.
//!
//! The weighted walks must query every incident hyperedge to learn its size,
//! charging `d_{X_k}` hyperedge queries per step; the uniform walks charge
//! exactly one node and one hyperedge query per step.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{EdgeId, Hypergraph, NodeId};
use crate::oracle::{Oracle, OracleError, QueryStats};
use crate::rng::{choose_index, substream, weighted_index, WalkRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WalkKind {
    /// Hyperedge weight `s - 1`; equivalent to a walk on the projected graph.
    #[serde(rename = "p-rw")]
    Projected,
    /// Hyperedge weight `(s - 1)^2`, favoring larger hyperedges.
    #[serde(rename = "c-rw")]
    Carletti,
    /// Uniform hyperedge selection.
    #[serde(rename = "ho-rw")]
    HigherOrder,
    /// Uniform selection avoiding the previous hyperedge when possible.
    #[serde(rename = "nb-ho-rw")]
    NonBacktracking,
}

impl WalkKind {
    pub const ALL: [WalkKind; 4] = [
        WalkKind::Projected,
        WalkKind::Carletti,
        WalkKind::HigherOrder,
        WalkKind::NonBacktracking,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            WalkKind::Projected => "p-rw",
            WalkKind::Carletti => "c-rw",
            WalkKind::HigherOrder => "ho-rw",
            WalkKind::NonBacktracking => "nb-ho-rw",
        }
    }
}

impl std::fmt::Display for WalkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for WalkKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "p-rw" => Ok(WalkKind::Projected),
            "c-rw" => Ok(WalkKind::Carletti),
            "ho-rw" => Ok(WalkKind::HigherOrder),
            "nb-ho-rw" => Ok(WalkKind::NonBacktracking),
            other => Err(format!(
                "unknown walk kind {other:?} (expected p-rw, c-rw, ho-rw or nb-ho-rw)"
            )),
        }
    }
}

/// Full description of one walk; identical configs on identical oracle
/// contents produce identical sequences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub walk: WalkKind,
    /// Number of sampled (node, hyperedge) pairs, `r >= 1`.
    pub length: u64,
    /// External label of the seed node.
    pub seed_node: String,
    pub rng_seed: u64,
    /// Substream index; 0 for standalone walks, the run index in experiments.
    #[serde(default)]
    pub stream: u64,
    /// Prefix discarded by estimators; carried as metadata, must be `< length`.
    #[serde(default)]
    pub burn_in: u64,
}

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("invalid walk config: {0}")]
    InvalidConfig(String),
    #[error("unknown seed node {0:?}")]
    UnknownSeedNode(String),
    #[error("sequence too short: need at least {need} steps, have {have}")]
    SequenceTooShort { need: usize, have: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// One sampled pair together with the degree and size observed while
/// querying, so estimators need no further oracle access.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub node: NodeId,
    pub hyperedge: EdgeId,
    /// `d_{X_k}`, from this step's node query.
    pub degree: u32,
    /// `s_{Y_k}`, from this step's hyperedge query.
    pub size: u32,
}

/// The ordered trace `(X_1, Y_1), ..., (X_r, Y_r)` plus query charges.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSequence {
    pub steps: Vec<Step>,
    pub stats: QueryStats,
    /// True when a query budget ended the walk before `length` steps.
    pub truncated: bool,
    pub config: WalkConfig,
}

impl WalkConfig {
    pub fn validate(&self) -> Result<(), WalkError> {
        if self.length < 1 {
            return Err(WalkError::InvalidConfig("length must be >= 1".into()));
        }
        if self.burn_in >= self.length {
            return Err(WalkError::InvalidConfig(format!(
                "burn-in {} must be smaller than length {}",
                self.burn_in, self.length
            )));
        }
        Ok(())
    }
}

/// Unnormalized hyperedge selection weight for a hyperedge of the given size.
/// Normalizing over the incident hyperedges of a node yields `S_{i,alpha}`.
pub fn selection_weight(kind: WalkKind, size: u32) -> f64 {
    match kind {
        WalkKind::Projected => (size - 1) as f64,
        WalkKind::Carletti => {
            let w = (size - 1) as f64;
            w * w
        }
        // Uniform kinds; the non-backtracking constraint is dynamic and does
        // not fit a per-pair weight.
        WalkKind::HigherOrder | WalkKind::NonBacktracking => 1.0,
    }
}

/// Analytic selection probability `S_{i,alpha}` on a fully known hypergraph.
pub fn selection_probability(
    h: &Hypergraph,
    kind: WalkKind,
    i: NodeId,
    alpha: EdgeId,
) -> Result<f64, WalkError> {
    let incident = h
        .incident_hyperedges(i)
        .ok_or_else(|| OracleError::UnknownNode(i.to_string()))?;
    if !incident.contains(&alpha) {
        return Err(WalkError::InvalidConfig(format!(
            "hyperedge {alpha} is not incident to node {i}"
        )));
    }
    let total: f64 = incident
        .iter()
        .map(|&a| selection_weight(kind, h.size(a).unwrap()))
        .sum();
    Ok(selection_weight(kind, h.size(alpha).unwrap()) / total)
}

/// Runs the configured walk against an oracle.
///
/// Returns exactly `length` steps, or fewer with `truncated` set when a
/// query budget runs out (a partially completed step is discarded). The
/// sequence is fully determined by the oracle contents and the config.
pub fn run_walk(oracle: &mut dyn Oracle, config: &WalkConfig) -> Result<SampleSequence, WalkError> {
    config.validate()?;
    let seed = oracle
        .resolve_node_label(&config.seed_node)
        .map_err(|_| WalkError::UnknownSeedNode(config.seed_node.clone()))?;
    let mut rng = substream(config.rng_seed, config.stream);
    let (steps, truncated) = drive_walk(oracle, config.walk, config.length, seed, &mut rng)?;
    Ok(SampleSequence {
        steps,
        stats: oracle.stats(),
        truncated,
        config: config.clone(),
    })
}

/// Low-level walk driver over an already-resolved seed node and an external
/// RNG. Experiment harnesses use this to control substreams directly.
pub fn drive_walk(
    oracle: &mut dyn Oracle,
    kind: WalkKind,
    length: u64,
    seed: NodeId,
    rng: &mut WalkRng,
) -> Result<(Vec<Step>, bool), WalkError> {
    let mut steps: Vec<Step> = Vec::with_capacity(length.min(1 << 20) as usize);
    let mut current = seed;
    let mut prev_edge: Option<EdgeId> = None;

    for _ in 0..length {
        let incident = match oracle.query_node(current) {
            Ok(v) => v,
            Err(OracleError::BudgetExhausted(_)) => return Ok((steps, true)),
            Err(e) => return Err(e.into()),
        };
        debug_assert!(!incident.is_empty());
        let degree = incident.len() as u32;

        let (edge, members) = match kind {
            WalkKind::HigherOrder | WalkKind::NonBacktracking => {
                let edge = select_uniform(kind, &incident, prev_edge, rng);
                let members = match oracle.query_hyperedge(edge) {
                    Ok(v) => v,
                    Err(OracleError::BudgetExhausted(_)) => return Ok((steps, true)),
                    Err(e) => return Err(e.into()),
                };
                (edge, members)
            }
            WalkKind::Projected | WalkKind::Carletti => {
                // Every candidate must be queried to learn its size; this is
                // the d_{X_k} hyperedge charge of the weighted walks.
                let mut member_lists: Vec<Vec<NodeId>> = Vec::with_capacity(incident.len());
                let mut exhausted = false;
                for &a in &incident {
                    match oracle.query_hyperedge(a) {
                        Ok(v) => member_lists.push(v),
                        Err(OracleError::BudgetExhausted(_)) => {
                            exhausted = true;
                            break;
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                if exhausted {
                    return Ok((steps, true));
                }
                let weights: Vec<f64> = member_lists
                    .iter()
                    .map(|m| selection_weight(kind, m.len() as u32))
                    .collect();
                let idx = weighted_index(rng, &weights);
                (incident[idx], member_lists.swap_remove(idx))
            }
        };
        debug_assert!(members.len() >= 2);
        let size = members.len() as u32;

        steps.push(Step {
            node: current,
            hyperedge: edge,
            degree,
            size,
        });

        let next: Vec<NodeId> = members.into_iter().filter(|&j| j != current).collect();
        current = next[choose_index(rng, next.len())];
        prev_edge = Some(edge);
    }
    Ok((steps, false))
}

fn select_uniform(
    kind: WalkKind,
    incident: &[EdgeId],
    prev: Option<EdgeId>,
    rng: &mut WalkRng,
) -> EdgeId {
    if kind == WalkKind::NonBacktracking {
        if let Some(p) = prev {
            if incident.len() == 1 {
                // Degree-1 node: returning to the previous hyperedge is the
                // only option.
                debug_assert_eq!(incident[0], p);
                return p;
            }
            let allowed: Vec<EdgeId> = incident.iter().copied().filter(|&a| a != p).collect();
            return allowed[choose_index(rng, allowed.len())];
        }
    }
    incident[choose_index(rng, incident.len())]
}

/// Fraction of adjacent steps with the same hyperedge sample,
/// `|{k : Y_k = Y_{k+1}}| / (r - 1)`.
pub fn hyperedge_repetition_rate(steps: &[Step]) -> Result<f64, WalkError> {
    adjacent_equal_rate(steps, |s| s.hyperedge)
}

/// Fraction of adjacent steps with the same node sample; zero for every walk
/// in this module since the node step always leaves the current node.
pub fn node_repetition_rate(steps: &[Step]) -> Result<f64, WalkError> {
    adjacent_equal_rate(steps, |s| s.node)
}

fn adjacent_equal_rate<T: PartialEq>(
    steps: &[Step],
    key: impl Fn(&Step) -> T,
) -> Result<f64, WalkError> {
    if steps.len() < 2 {
        return Err(WalkError::SequenceTooShort {
            need: 2,
            have: steps.len(),
        });
    }
    let repeats = steps
        .windows(2)
        .filter(|w| key(&w[0]) == key(&w[1]))
        .count();
    Ok(repeats as f64 / (steps.len() - 1) as f64)
}
