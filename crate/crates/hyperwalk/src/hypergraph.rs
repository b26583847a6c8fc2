//! Immutable in-memory hypergraph with incidence lookups.
//!
//! A hypergraph is a set of nodes and a set of hyperedges, where every
//! hyperedge contains at least two distinct nodes. Internally nodes and
//! hyperedges are identified by dense indices (`0..n` and `0..m`); external
//! node labels are kept in a bidirectional table so that sparse dataset IDs
//! survive a round trip. Hyperedges are labeled by their decimal index.
//!
//! The structure is immutable after [`Hypergraph::build`] and safe to share
//! across threads.

use std::collections::HashMap;

use thiserror::Error;

/// Dense node index.
pub type NodeId = u32;
/// Dense hyperedge index.
pub type EdgeId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("input contains no hyperedges")]
    EmptyInput,
    #[error("hyperedge {index} has fewer than 2 members")]
    HyperedgeTooSmall { index: usize },
    #[error("hyperedge {index} lists node {label:?} more than once")]
    DuplicateMember { index: usize, label: String },
}

/// Immutable node/hyperedge incidence structure.
///
/// Node labels are densified to `0..n` in first-appearance order over the
/// input hyperedge lists. Two hyperedges with identical member sets are kept
/// as distinct hyperedges (coauthorship data contains such multi-edges).
#[derive(Debug, Clone)]
pub struct Hypergraph {
    /// Per hyperedge, sorted member node ids.
    members: Vec<Vec<NodeId>>,
    /// Per node, sorted incident hyperedge ids.
    incident: Vec<Vec<EdgeId>>,
    /// Node id -> external label.
    labels: Vec<String>,
    /// External label -> node id.
    index: HashMap<String, NodeId>,
}

impl Hypergraph {
    /// Builds a hypergraph from hyperedges given as lists of node labels.
    ///
    /// Every hyperedge must contain at least two distinct labels; a label
    /// repeated within one hyperedge is rejected rather than deduplicated.
    pub fn build<S: AsRef<str>>(hyperedges: &[Vec<S>]) -> Result<Self, BuildError> {
        if hyperedges.is_empty() {
            return Err(BuildError::EmptyInput);
        }
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, NodeId> = HashMap::new();
        let mut members: Vec<Vec<NodeId>> = Vec::with_capacity(hyperedges.len());

        for (alpha, edge) in hyperedges.iter().enumerate() {
            if edge.len() < 2 {
                return Err(BuildError::HyperedgeTooSmall { index: alpha });
            }
            let mut ids: Vec<NodeId> = Vec::with_capacity(edge.len());
            for label in edge {
                let label = label.as_ref();
                let id = match index.get(label) {
                    Some(&id) => id,
                    None => {
                        let id = labels.len() as NodeId;
                        labels.push(label.to_string());
                        index.insert(label.to_string(), id);
                        id
                    }
                };
                if ids.contains(&id) {
                    return Err(BuildError::DuplicateMember {
                        index: alpha,
                        label: label.to_string(),
                    });
                }
                ids.push(id);
            }
            ids.sort_unstable();
            members.push(ids);
        }

        let mut incident: Vec<Vec<EdgeId>> = vec![Vec::new(); labels.len()];
        for (alpha, ids) in members.iter().enumerate() {
            for &i in ids {
                incident[i as usize].push(alpha as EdgeId);
            }
        }
        // Incidence lists are already sorted: hyperedges were scanned in
        // increasing index order.

        Ok(Self {
            members,
            incident,
            labels,
            index,
        })
    }

    /// Convenience constructor for tests: integer labels.
    pub fn from_lists(hyperedges: &[&[u64]]) -> Result<Self, BuildError> {
        let as_labels: Vec<Vec<String>> = hyperedges
            .iter()
            .map(|e| e.iter().map(|v| v.to_string()).collect())
            .collect();
        Self::build(&as_labels)
    }

    /// Number of nodes `n`.
    pub fn node_count(&self) -> usize {
        self.incident.len()
    }

    /// Number of hyperedges `m`.
    pub fn hyperedge_count(&self) -> usize {
        self.members.len()
    }

    /// Total incidence count `D = sum of degrees = sum of sizes`.
    pub fn incidence_count(&self) -> usize {
        self.members.iter().map(Vec::len).sum()
    }

    /// Degree of node `i` (number of incident hyperedges), `None` if out of range.
    pub fn degree(&self, i: NodeId) -> Option<u32> {
        self.incident.get(i as usize).map(|v| v.len() as u32)
    }

    /// Size of hyperedge `alpha` (number of member nodes), `None` if out of range.
    pub fn size(&self, alpha: EdgeId) -> Option<u32> {
        self.members.get(alpha as usize).map(|v| v.len() as u32)
    }

    /// Sorted hyperedges incident to node `i`.
    pub fn incident_hyperedges(&self, i: NodeId) -> Option<&[EdgeId]> {
        self.incident.get(i as usize).map(Vec::as_slice)
    }

    /// Sorted member nodes of hyperedge `alpha`.
    pub fn hyperedge_members(&self, alpha: EdgeId) -> Option<&[NodeId]> {
        self.members.get(alpha as usize).map(Vec::as_slice)
    }

    /// External label of node `i`.
    pub fn node_label(&self, i: NodeId) -> Option<&str> {
        self.labels.get(i as usize).map(String::as_str)
    }

    /// Node id for an external label.
    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    /// Iterates over `(node, hyperedge)` incidence pairs in lexicographic
    /// `(i, alpha)` order.
    pub fn incidence_pairs(&self) -> impl Iterator<Item = (NodeId, EdgeId)> + '_ {
        self.incident
            .iter()
            .enumerate()
            .flat_map(|(i, edges)| edges.iter().map(move |&a| (i as NodeId, a)))
    }

    /// True iff every node is reachable from node 0 by repeatedly traversing
    /// hyperedges (connectivity of the bipartite incidence graph).
    pub fn is_connected(&self) -> bool {
        if self.node_count() == 0 {
            return true;
        }
        let nodes = self.component_of(0);
        nodes.iter().filter(|&&seen| seen).count() == self.node_count()
    }

    /// BFS over the bipartite incidence graph from `start`; returns the
    /// node-visited bitmap.
    fn component_of(&self, start: NodeId) -> Vec<bool> {
        let mut node_seen = vec![false; self.node_count()];
        let mut edge_seen = vec![false; self.hyperedge_count()];
        let mut queue = std::collections::VecDeque::new();
        node_seen[start as usize] = true;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            for &alpha in &self.incident[i as usize] {
                if edge_seen[alpha as usize] {
                    continue;
                }
                edge_seen[alpha as usize] = true;
                for &j in &self.members[alpha as usize] {
                    if !node_seen[j as usize] {
                        node_seen[j as usize] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        node_seen
    }

    /// Assigns a component id to every node.
    fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.node_count()];
        let mut count = 0;
        for start in 0..self.node_count() {
            if comp[start] != usize::MAX {
                continue;
            }
            let seen = self.component_of(start as NodeId);
            for (i, &s) in seen.iter().enumerate() {
                if s && comp[i] == usize::MAX {
                    comp[i] = count;
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// Extracts the largest connected component as a new hypergraph.
    ///
    /// The component is chosen by node count; ties go to the component
    /// containing the smallest node index. Member labels are preserved and
    /// indices re-densified.
    pub fn largest_connected_component(&self) -> Hypergraph {
        let (comp, count) = self.components();
        if count <= 1 {
            return self.clone();
        }
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c] += 1;
        }
        // Components are discovered in increasing order of their minimum
        // node index, so the first maximum realizes the tie-break.
        let best = (0..count).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c))).unwrap();

        let keep: Vec<Vec<String>> = self
            .members
            .iter()
            .filter(|ids| ids.iter().all(|&i| comp[i as usize] == best))
            .map(|ids| {
                ids.iter()
                    .map(|&i| self.labels[i as usize].clone())
                    .collect()
            })
            .collect();
        // A hyperedge lies entirely inside one component, so `keep` is
        // non-empty and every invariant is preserved.
        Hypergraph::build(&keep).expect("component extraction preserves validity")
    }

    /// Canonical export: one hyperedge per line, member labels separated by a
    /// single space, hyperedges in index order, members in node-index order.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for ids in &self.members {
            let line: Vec<&str> = ids.iter().map(|&i| self.labels[i as usize].as_str()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two-hyperedge example used throughout: e0 = {1,2,3}, e1 = {2,3}.
    pub(crate) fn h_tri() -> Hypergraph {
        Hypergraph::from_lists(&[&[1, 2, 3], &[2, 3]]).unwrap()
    }

    #[test]
    fn build_counts_degrees_and_sizes() {
        let h = h_tri();
        assert_eq!(h.node_count(), 3);
        assert_eq!(h.hyperedge_count(), 2);
        let d: Vec<u32> = (0..3).map(|i| h.degree(i).unwrap()).collect();
        assert_eq!(d, vec![1, 2, 2]);
        let s: Vec<u32> = (0..2).map(|a| h.size(a).unwrap()).collect();
        assert_eq!(s, vec![3, 2]);
        assert_eq!(h.incidence_count(), 5);
    }

    #[test]
    fn build_single_hyperedge() {
        let h = Hypergraph::from_lists(&[&[1, 2]]).unwrap();
        assert_eq!(h.node_count(), 2);
        assert_eq!(h.hyperedge_count(), 1);
        assert_eq!(h.degree(0), Some(1));
        assert_eq!(h.degree(1), Some(1));
        assert_eq!(h.size(0), Some(2));
        assert_eq!(h.incidence_count(), 2);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            Hypergraph::from_lists(&[]).unwrap_err(),
            BuildError::EmptyInput
        );
        assert_eq!(
            Hypergraph::from_lists(&[&[1]]).unwrap_err(),
            BuildError::HyperedgeTooSmall { index: 0 }
        );
        assert_eq!(
            Hypergraph::from_lists(&[&[1, 2], &[3, 3]]).unwrap_err(),
            BuildError::DuplicateMember {
                index: 1,
                label: "3".into()
            }
        );
    }

    #[test]
    fn accessors_out_of_range() {
        let h = h_tri();
        assert_eq!(h.degree(3), None);
        assert_eq!(h.size(2), None);
        assert_eq!(h.node_id("7"), None);
    }

    #[test]
    fn degree_size_sum_identity() {
        let h = Hypergraph::from_lists(&[&[1, 2, 3], &[2, 3], &[4, 1], &[1, 4, 5, 6]]).unwrap();
        let dsum: u32 = (0..h.node_count() as u32).map(|i| h.degree(i).unwrap()).sum();
        let ssum: u32 = (0..h.hyperedge_count() as u32).map(|a| h.size(a).unwrap()).sum();
        assert_eq!(dsum, ssum);
        assert_eq!(dsum as usize, h.incidence_count());
    }

    #[test]
    fn connectivity() {
        assert!(h_tri().is_connected());
        assert!(!Hypergraph::from_lists(&[&[1, 2], &[3, 4]]).unwrap().is_connected());
        assert!(Hypergraph::from_lists(&[&[1, 2], &[2, 3]]).unwrap().is_connected());
    }

    #[test]
    fn lcc_picks_larger_component() {
        let h = Hypergraph::from_lists(&[&[1, 2], &[3, 4, 5]]).unwrap();
        let lcc = h.largest_connected_component();
        assert_eq!(lcc.node_count(), 3);
        assert_eq!(lcc.hyperedge_count(), 1);
        let mut labels: Vec<&str> = (0..3).map(|i| lcc.node_label(i).unwrap()).collect();
        labels.sort_unstable();
        assert_eq!(labels, vec!["3", "4", "5"]);
        assert!(lcc.is_connected());
    }

    #[test]
    fn lcc_identity_on_connected_input() {
        let h = h_tri();
        let lcc = h.largest_connected_component();
        assert_eq!(lcc.export(), h.export());
    }

    #[test]
    fn lcc_multi_component() {
        let h = Hypergraph::from_lists(&[&[1, 2], &[2, 3], &[4, 5]]).unwrap();
        let lcc = h.largest_connected_component();
        assert_eq!(lcc.node_count(), 3);
        assert_eq!(lcc.hyperedge_count(), 2);
        assert!(lcc.is_connected());
    }

    #[test]
    fn lcc_tie_breaks_on_smallest_node_index() {
        // Two components of equal node count; {1,2} holds the smaller index.
        let h = Hypergraph::from_lists(&[&[3, 4], &[1, 2]]).unwrap();
        let lcc = h.largest_connected_component();
        let mut labels: Vec<&str> = (0..2).map(|i| lcc.node_label(i).unwrap()).collect();
        labels.sort_unstable();
        assert_eq!(labels, vec!["3", "4"]);
    }

    #[test]
    fn export_round_trip_is_idempotent() {
        let h = Hypergraph::from_lists(&[&[5, 9, 2], &[9, 2], &[2, 7]]).unwrap();
        let once = h.export();
        let lines: Vec<Vec<String>> = once
            .lines()
            .map(|l| l.split_whitespace().map(str::to_string).collect())
            .collect();
        let rebuilt = Hypergraph::build(&lines).unwrap();
        assert_eq!(rebuilt.export(), once);
    }

    #[test]
    fn multi_hyperedges_are_permitted() {
        let h = Hypergraph::from_lists(&[&[1, 2], &[1, 2]]).unwrap();
        assert_eq!(h.hyperedge_count(), 2);
        assert_eq!(h.degree(0), Some(2));
    }

    #[test]
    fn incidence_pairs_lexicographic() {
        let h = h_tri();
        let pairs: Vec<(NodeId, EdgeId)> = h.incidence_pairs().collect();
        assert_eq!(pairs, vec![(0, 0), (1, 0), (1, 1), (2, 0), (2, 1)]);
    }
}
