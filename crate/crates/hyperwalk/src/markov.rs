//! Exact chain analysis on desk-scale hypergraphs.
//!
//! The non-backtracking walk's pair sequence `(X_k, Y_k)` is a Markov chain
//! on the incidence pairs `(i, alpha)` with `b_{i,alpha} = 1`. This module
//! builds that chain's transition matrix `U` in closed form, the node-level
//! transition matrices `T` of the three memoryless walks, solves stationary
//! distributions, and checks the structural claims behind the estimators:
//! every column of `U` sums to one, so the uniform vector `1/D` is
//! stationary.
//!
//! Everything here is verification tooling: it needs the whole hypergraph
//! in memory and refuses inputs past [`MAX_STATES`] incidence pairs. The
//! walkers in [`crate::walk`] are the scalable path.

use std::collections::{HashMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{EdgeId, Hypergraph, NodeId};
use crate::oracle::InMemoryOracle;
use crate::rng::substream;
use crate::walk::{drive_walk, selection_probability, WalkKind};

/// Hard ceiling on the number of incidence pairs the analysis will touch.
pub const MAX_STATES: usize = 1_000_000;

/// Below this dimension the stationary solver may fall back to a direct
/// linear solve on a dense copy.
const DENSE_LIMIT: usize = 2000;

#[derive(Debug, Error)]
pub enum MarkovError {
    #[error("{0} incidence pairs exceed the analysis limit of {MAX_STATES}")]
    TooLarge(usize),
    #[error("stationary distribution did not converge within {0} iterations")]
    NoConvergence(u64),
    #[error("the {0} node sequence is not a Markov chain; no transition matrix exists")]
    NoNodeMatrix(WalkKind),
    #[error("{missing} of {states} states were never left by the sampled walks")]
    InsufficientVisits { missing: usize, states: usize },
}

/// The incidence pairs of a hypergraph in lexicographic `(i, alpha)` order,
/// with a reverse index. Its size is `D = sum of degrees = sum of sizes`.
#[derive(Debug, Clone)]
pub struct StateSpace {
    pairs: Vec<(NodeId, EdgeId)>,
    index: HashMap<(NodeId, EdgeId), usize>,
}

impl StateSpace {
    pub fn new(h: &Hypergraph) -> Self {
        let pairs: Vec<(NodeId, EdgeId)> = h.incidence_pairs().collect();
        let index = pairs.iter().enumerate().map(|(s, &p)| (p, s)).collect();
        StateSpace { pairs, index }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, state: usize) -> (NodeId, EdgeId) {
        self.pairs[state]
    }

    pub fn state(&self, i: NodeId, alpha: EdgeId) -> Option<usize> {
        self.index.get(&(i, alpha)).copied()
    }

    pub fn pairs(&self) -> &[(NodeId, EdgeId)] {
        &self.pairs
    }
}

/// A sparse row-stochastic matrix; `entry(x, y)` is the probability of
/// moving from state `x` to state `y`.
#[derive(Debug, Clone)]
pub struct ChainMatrix {
    rows: Vec<Vec<(usize, f64)>>,
}

impl ChainMatrix {
    /// Builds a matrix from per-row `(column, probability)` lists.
    ///
    /// Panics when a probability is negative or a row does not sum to one
    /// within `1e-9`; callers construct rows programmatically, so a
    /// violation is a bug, not an input error.
    pub fn from_rows(mut rows: Vec<Vec<(usize, f64)>>) -> Self {
        let dim = rows.len();
        for row in &mut rows {
            let mut sum = 0.0;
            for &(col, p) in row.iter() {
                assert!(col < dim, "column {col} out of bounds for dimension {dim}");
                assert!(p >= 0.0, "negative transition probability {p}");
                sum += p;
            }
            assert!(
                (sum - 1.0).abs() <= 1e-9,
                "row sums to {sum}, expected 1"
            );
            row.sort_by_key(|&(col, _)| col);
        }
        ChainMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, x: usize) -> &[(usize, f64)] {
        &self.rows[x]
    }

    pub fn entry(&self, x: usize, y: usize) -> f64 {
        self.rows[x]
            .binary_search_by_key(&y, |&(col, _)| col)
            .map(|i| self.rows[x][i].1)
            .unwrap_or(0.0)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(_, p)| p).sum())
            .collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.dim()];
        for row in &self.rows {
            for &(col, p) in row {
                sums[col] += p;
            }
        }
        sums
    }

    /// Left product `v^T M`, the one-step push-forward of a distribution.
    pub fn apply_left(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim());
        let mut out = vec![0.0; self.dim()];
        for (x, row) in self.rows.iter().enumerate() {
            let vx = v[x];
            if vx == 0.0 {
                continue;
            }
            for &(col, p) in row {
                out[col] += vx * p;
            }
        }
        out
    }

    /// Coordinate-list dump, one `row col value` line per nonzero entry.
    pub fn coordinate_dump(&self) -> String {
        let mut out = String::new();
        for (x, row) in self.rows.iter().enumerate() {
            for &(col, p) in row {
                out.push_str(&format!("{x} {col} {p}\n"));
            }
        }
        out
    }
}

fn check_size(states: usize) -> Result<(), MarkovError> {
    if states > MAX_STATES {
        return Err(MarkovError::TooLarge(states));
    }
    Ok(())
}

/// Builds the pair-chain transition matrix of the non-backtracking walk.
///
/// From `(i, alpha)` the walk moves to a uniform member `j != i` of `alpha`,
/// then selects `beta` uniformly from `j`'s hyperedges other than `alpha`,
/// or `beta = alpha` when `j` has no other hyperedge. Entries are therefore
/// `1/((s_alpha - 1)(d_j - 1))` in the regular case and `1/(s_alpha - 1)`
/// at degree-one nodes.
pub fn build_nb_ho_matrix(h: &Hypergraph) -> Result<(StateSpace, ChainMatrix), MarkovError> {
    check_size(h.incidence_count())?;
    let space = StateSpace::new(h);
    let mut rows = Vec::with_capacity(space.len());
    for &(i, alpha) in space.pairs() {
        let members = h.hyperedge_members(alpha).unwrap();
        let node_p = 1.0 / (members.len() - 1) as f64;
        let mut row: Vec<(usize, f64)> = Vec::new();
        for &j in members.iter().filter(|&&j| j != i) {
            let incident = h.incident_hyperedges(j).unwrap();
            if incident.len() == 1 {
                row.push((space.state(j, alpha).unwrap(), node_p));
            } else {
                let edge_p = node_p / (incident.len() - 1) as f64;
                for &beta in incident.iter().filter(|&&b| b != alpha) {
                    row.push((space.state(j, beta).unwrap(), edge_p));
                }
            }
        }
        rows.push(row);
    }
    Ok((space, ChainMatrix::from_rows(rows)))
}

/// Builds the node-level transition matrix of a memoryless walk,
/// `T_{i,j} = sum over shared hyperedges of S_{i,alpha} / (s_alpha - 1)`,
/// with a zero diagonal. The non-backtracking walk's node sequence depends
/// on the previous hyperedge and is rejected.
pub fn build_node_matrix(h: &Hypergraph, kind: WalkKind) -> Result<ChainMatrix, MarkovError> {
    if kind == WalkKind::NonBacktracking {
        return Err(MarkovError::NoNodeMatrix(kind));
    }
    check_size(h.incidence_count())?;
    let n = h.node_count();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n as NodeId {
        let mut mass: HashMap<usize, f64> = HashMap::new();
        for &alpha in h.incident_hyperedges(i).unwrap() {
            let s = selection_probability(h, kind, i, alpha).expect("incident pair");
            let members = h.hyperedge_members(alpha).unwrap();
            let share = s / (members.len() - 1) as f64;
            for &j in members.iter().filter(|&&j| j != i) {
                *mass.entry(j as usize).or_insert(0.0) += share;
            }
        }
        rows.push(mass.into_iter().collect());
    }
    Ok(ChainMatrix::from_rows(rows))
}

fn l1_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Solves `pi^T = pi^T M` starting from the uniform distribution.
pub fn stationary_distribution(
    m: &ChainMatrix,
    tol: f64,
    max_iters: u64,
) -> Result<Vec<f64>, MarkovError> {
    let uniform = vec![1.0 / m.dim() as f64; m.dim()];
    stationary_distribution_from(m, &uniform, tol, max_iters)
}

/// Stationary solver with an explicit starting distribution.
///
/// Runs power iteration, checking both the current iterate and the running
/// Cesàro average; the average converges even on periodic chains, where the
/// iterates cycle forever. If neither settles within `max_iters`, small
/// matrices get a direct linear solve of the balance equations.
pub fn stationary_distribution_from(
    m: &ChainMatrix,
    start: &[f64],
    tol: f64,
    max_iters: u64,
) -> Result<Vec<f64>, MarkovError> {
    let dim = m.dim();
    assert_eq!(start.len(), dim);
    let total: f64 = start.iter().sum();
    let mut pi: Vec<f64> = start.iter().map(|x| x / total).collect();
    let mut cesaro = vec![0.0; dim];
    for t in 1..=max_iters {
        let next = m.apply_left(&pi);
        if l1_diff(&next, &pi) <= tol {
            return Ok(pi);
        }
        for (acc, x) in cesaro.iter_mut().zip(&next) {
            *acc += x;
        }
        let avg: Vec<f64> = cesaro.iter().map(|x| x / t as f64).collect();
        if l1_diff(&m.apply_left(&avg), &avg) <= tol {
            return Ok(normalize(avg));
        }
        pi = next;
    }
    if dim <= DENSE_LIMIT {
        if let Some(direct) = direct_solve(m) {
            if l1_diff(&m.apply_left(&direct), &direct) <= tol {
                return Ok(direct);
            }
        }
    }
    Err(MarkovError::NoConvergence(max_iters))
}

/// Solves the balance equations `(M^T - I) pi = 0` with the normalization
/// `sum pi = 1` replacing the first equation. Works for periodic chains too;
/// returns `None` when the system is singular (reducible chains) or the
/// solution leaves the simplex.
fn direct_solve(m: &ChainMatrix) -> Option<Vec<f64>> {
    let dim = m.dim();
    let mut a = nalgebra::DMatrix::<f64>::zeros(dim, dim);
    for x in 0..dim {
        for &(col, p) in m.row(x) {
            a[(col, x)] += p;
        }
    }
    for i in 0..dim {
        a[(i, i)] -= 1.0;
    }
    for col in 0..dim {
        a[(0, col)] = 1.0;
    }
    let mut b = nalgebra::DVector::<f64>::zeros(dim);
    b[0] = 1.0;
    let x = a.lu().solve(&b)?;
    let mut pi: Vec<f64> = x.iter().copied().collect();
    for v in pi.iter_mut() {
        if *v < 0.0 && *v > -1e-9 {
            *v = 0.0;
        }
    }
    if pi.iter().any(|&v| v < 0.0) {
        return None;
    }
    Some(normalize(pi))
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let total: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= total;
    }
    v
}

fn is_irreducible(m: &ChainMatrix) -> bool {
    let mut graph = DiGraph::<(), ()>::with_capacity(m.dim(), m.dim());
    for _ in 0..m.dim() {
        graph.add_node(());
    }
    for x in 0..m.dim() {
        for &(col, p) in m.row(x) {
            if p > 0.0 {
                graph.add_edge((x as u32).into(), (col as u32).into(), ());
            }
        }
    }
    tarjan_scc(&graph).len() == 1
}

/// Period of an irreducible chain: the gcd of `level(x) + 1 - level(y)` over
/// all transitions `x -> y`, with levels from a breadth-first search.
/// A period of 1 means aperiodic.
fn chain_period(m: &ChainMatrix) -> usize {
    let dim = m.dim();
    let mut level = vec![usize::MAX; dim];
    level[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &(col, _) in m.row(x) {
            if level[col] == usize::MAX {
                level[col] = level[x] + 1;
                queue.push_back(col);
            }
        }
    }
    let mut g = 0usize;
    for x in 0..dim {
        for &(col, _) in m.row(x) {
            g = gcd(g, level[x] + 1 - level[col]);
        }
    }
    g
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Outcome of checking the doubly-stochastic structure of the
/// non-backtracking pair chain on one hypergraph.
///
/// `pass` covers the two quantitative claims: every column of `U` sums to
/// one, and the uniform vector `1/D` is stationary. Irreducibility and the
/// period are reported alongside because periodic instances exist (a two
/// hyperedge path yields a deterministic 4-cycle) even though uniform
/// stationarity still holds there; a period greater than one therefore does
/// not fail the check.
#[derive(Debug, Clone, Serialize)]
pub struct StationarityReport {
    pub states: usize,
    pub connected: bool,
    pub column_sum_max_dev: Option<f64>,
    pub stationarity_residual: Option<f64>,
    pub irreducible: bool,
    pub period: Option<usize>,
    pub pass: bool,
}

/// Checks column sums and uniform stationarity of the pair chain.
/// Disconnected hypergraphs are flagged and not evaluated.
pub fn verify_uniform_stationarity(
    h: &Hypergraph,
    tol: f64,
) -> Result<StationarityReport, MarkovError> {
    check_size(h.incidence_count())?;
    if !h.is_connected() {
        return Ok(StationarityReport {
            states: h.incidence_count(),
            connected: false,
            column_sum_max_dev: None,
            stationarity_residual: None,
            irreducible: false,
            period: None,
            pass: false,
        });
    }
    let (space, u) = build_nb_ho_matrix(h)?;
    let column_sum_max_dev = u
        .column_sums()
        .iter()
        .map(|s| (s - 1.0).abs())
        .fold(0.0, f64::max);
    let uniform = vec![1.0 / space.len() as f64; space.len()];
    let stationarity_residual = l1_diff(&u.apply_left(&uniform), &uniform);
    let irreducible = is_irreducible(&u);
    let period = irreducible.then(|| chain_period(&u));
    Ok(StationarityReport {
        states: space.len(),
        connected: true,
        column_sum_max_dev: Some(column_sum_max_dev),
        stationarity_residual: Some(stationarity_residual),
        irreducible,
        period,
        pass: column_sum_max_dev <= tol && stationarity_residual <= tol,
    })
}

/// Result of comparing empirical transition frequencies against an analytic
/// matrix; `max_abs_dev` shrinks like one over the square root of the visit
/// counts.
#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalComparison {
    pub walk: WalkKind,
    pub states: usize,
    /// Transitions observed across all runs.
    pub transitions: u64,
    /// Outgoing transition count per state.
    pub visits: Vec<u64>,
    pub max_abs_dev: f64,
}

/// Runs walks and compares their per-state transition frequencies with the
/// analytic matrix: pair-chain transitions for the non-backtracking
/// walk, node-level transitions for the memoryless walks.
///
/// Run `k` uses RNG substream `k` of `seed` and starts from node `k mod n`.
/// Fails with `InsufficientVisits` when some state was never left, since a
/// frequency is undefined there.
pub fn empirical_vs_exact(
    h: &Hypergraph,
    kind: WalkKind,
    r: u64,
    runs: u64,
    seed: u64,
) -> Result<EmpiricalComparison, MarkovError> {
    let (exact, to_state): (ChainMatrix, Box<dyn Fn(NodeId, EdgeId) -> usize>) =
        if kind == WalkKind::NonBacktracking {
            let (space, u) = build_nb_ho_matrix(h)?;
            (
                u,
                Box::new(move |i, alpha| space.state(i, alpha).unwrap()),
            )
        } else {
            (
                build_node_matrix(h, kind)?,
                Box::new(|i, _| i as usize),
            )
        };
    let states = exact.dim();
    let mut counts: Vec<HashMap<usize, u64>> = vec![HashMap::new(); states];
    let mut visits = vec![0u64; states];
    let mut transitions = 0u64;

    for run in 0..runs {
        let mut oracle = InMemoryOracle::new(h);
        let mut rng = substream(seed, run);
        let start = (run % h.node_count() as u64) as NodeId;
        let (steps, _) =
            drive_walk(&mut oracle, kind, r, start, &mut rng).expect("in-memory walk");
        for w in steps.windows(2) {
            let from = to_state(w[0].node, w[0].hyperedge);
            let to = to_state(w[1].node, w[1].hyperedge);
            *counts[from].entry(to).or_insert(0) += 1;
            visits[from] += 1;
            transitions += 1;
        }
    }

    let missing = visits.iter().filter(|&&v| v == 0).count();
    if missing > 0 {
        return Err(MarkovError::InsufficientVisits { missing, states });
    }

    let mut max_abs_dev = 0.0f64;
    for from in 0..states {
        let total = visits[from] as f64;
        // Union of analytic support and observed targets: misses show up as
        // |0 - p| or |freq - 0|.
        for &(to, p) in exact.row(from) {
            let freq = counts[from].get(&to).copied().unwrap_or(0) as f64 / total;
            max_abs_dev = max_abs_dev.max((freq - p).abs());
        }
        for (&to, &c) in &counts[from] {
            if exact.entry(from, to) == 0.0 {
                max_abs_dev = max_abs_dev.max(c as f64 / total);
            }
        }
    }

    Ok(EmpiricalComparison {
        walk: kind,
        states,
        transitions,
        visits,
        max_abs_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h_tri() -> Hypergraph {
        Hypergraph::from_lists(&[&[1, 2, 3], &[2, 3]]).unwrap()
    }

    fn path() -> Hypergraph {
        Hypergraph::from_lists(&[&[1, 2], &[2, 3]]).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn state_space_is_lexicographic() {
        let h = h_tri();
        let space = StateSpace::new(&h);
        assert_eq!(space.len(), h.incidence_count());
        assert_eq!(space.len(), 5);
        assert_eq!(space.pairs(), &[(0, 0), (1, 0), (1, 1), (2, 0), (2, 1)]);
        assert_eq!(space.state(1, 1), Some(2));
        assert_eq!(space.state(0, 1), None);
        let two_nodes = Hypergraph::from_lists(&[&[1, 2]]).unwrap();
        assert_eq!(StateSpace::new(&two_nodes).len(), 2);
    }

    #[test]
    fn nb_matrix_hand_checked_entries() {
        let h = h_tri();
        let (space, u) = build_nb_ho_matrix(&h).unwrap();
        let s = |label: &str, alpha: EdgeId| {
            space.state(h.node_id(label).unwrap(), alpha).unwrap()
        };
        // From (1,a): move to 2 or 3, then forced to the other hyperedge b.
        assert!(close(u.entry(s("1", 0), s("2", 1)), 0.5));
        // From (2,b): the only other member of b is 3, which must switch to a.
        assert!(close(u.entry(s("2", 1), s("3", 0)), 1.0));
        // From (2,a): moving to the degree-one node 1 keeps hyperedge a.
        assert!(close(u.entry(s("2", 0), s("1", 0)), 0.5));
        for sum in u.row_sums() {
            assert!(close(sum, 1.0));
        }
        for sum in u.column_sums() {
            assert!(close(sum, 1.0));
        }
    }

    #[test]
    fn path_chain_is_a_four_cycle_permutation() {
        let (_, u) = build_nb_ho_matrix(&path()).unwrap();
        assert_eq!(u.dim(), 4);
        for x in 0..4 {
            let row = u.row(x);
            assert_eq!(row.len(), 1);
            assert_eq!(row[0].1, 1.0);
        }
        assert!(is_irreducible(&u));
        assert_eq!(chain_period(&u), 4);
    }

    #[test]
    fn node_matrices_match_hand_derivation() {
        let h = h_tri();
        let from = h.node_id("2").unwrap() as usize;
        let to = h.node_id("3").unwrap() as usize;
        let one = h.node_id("1").unwrap() as usize;
        let expect = [
            (WalkKind::Projected, 2.0 / 3.0),
            (WalkKind::Carletti, 3.0 / 5.0),
            (WalkKind::HigherOrder, 3.0 / 4.0),
        ];
        for (kind, t23) in expect {
            let t = build_node_matrix(&h, kind).unwrap();
            assert!(close(t.entry(from, to), t23), "{kind}: {}", t.entry(from, to));
            for i in 0..t.dim() {
                assert_eq!(t.entry(i, i), 0.0, "{kind}: nonzero diagonal");
            }
            for sum in t.row_sums() {
                assert!(close(sum, 1.0));
            }
        }
        let ho = build_node_matrix(&h, WalkKind::HigherOrder).unwrap();
        assert!(close(ho.entry(from, one), 1.0 / 4.0));
        assert!(matches!(
            build_node_matrix(&h, WalkKind::NonBacktracking),
            Err(MarkovError::NoNodeMatrix(_))
        ));
    }

    #[test]
    fn nb_stationary_distribution_is_uniform() {
        let (_, u) = build_nb_ho_matrix(&h_tri()).unwrap();
        let pi = stationary_distribution(&u, 1e-12, 10_000).unwrap();
        for p in pi {
            assert!(close(p, 0.2));
        }
    }

    #[test]
    fn cesaro_average_handles_the_periodic_path_chain() {
        let (_, u) = build_nb_ho_matrix(&path()).unwrap();
        // From a point mass the iterates cycle with period 4 and never
        // converge; the running average still settles on the uniform law.
        let start = [1.0, 0.0, 0.0, 0.0];
        let pi = stationary_distribution_from(&u, &start, 1e-12, 100).unwrap();
        for p in pi {
            assert!(close(p, 0.25));
        }
    }

    #[test]
    fn direct_solve_fallback_when_iteration_is_capped() {
        let (_, u) = build_nb_ho_matrix(&path()).unwrap();
        let start = [1.0, 0.0, 0.0, 0.0];
        // Too few iterations for the average to settle, so the dense solve
        // must produce the answer.
        let pi = stationary_distribution_from(&u, &start, 1e-12, 2).unwrap();
        for p in pi {
            assert!(close(p, 0.25));
        }
    }

    #[test]
    fn node_chain_stationary_solves_balance_equations() {
        let h = h_tri();
        for kind in [WalkKind::Projected, WalkKind::Carletti, WalkKind::HigherOrder] {
            let t = build_node_matrix(&h, kind).unwrap();
            let pi = stationary_distribution(&t, 1e-12, 100_000).unwrap();
            assert!(close(pi.iter().sum::<f64>(), 1.0));
            assert!(l1_diff(&t.apply_left(&pi), &pi) <= 1e-12);
            assert!(pi.iter().all(|&p| p > 0.0));
        }
    }

    #[test]
    fn no_convergence_without_dense_fallback() {
        // A deterministic cycle just past the dense-solve limit: iterates
        // never settle, the average needs a full period, and no fallback
        // exists, so the solver must report failure honestly.
        let dim = DENSE_LIMIT + 1;
        let rows: Vec<Vec<(usize, f64)>> =
            (0..dim).map(|x| vec![((x + 1) % dim, 1.0)]).collect();
        let m = ChainMatrix::from_rows(rows);
        let mut start = vec![0.0; dim];
        start[0] = 1.0;
        assert!(matches!(
            stationary_distribution_from(&m, &start, 1e-12, 50),
            Err(MarkovError::NoConvergence(50))
        ));
    }

    #[test]
    fn verify_uniform_stationarity_passes_on_h_tri() {
        let report = verify_uniform_stationarity(&h_tri(), 1e-12).unwrap();
        assert!(report.pass);
        assert!(report.connected);
        assert!(report.irreducible);
        assert_eq!(report.period, Some(1));
        assert!(report.column_sum_max_dev.unwrap() <= 1e-12);
        assert!(report.stationarity_residual.unwrap() <= 1e-12);
    }

    #[test]
    fn verify_uniform_stationarity_surfaces_periodicity_but_passes() {
        let report = verify_uniform_stationarity(&path(), 1e-12).unwrap();
        assert!(report.pass, "uniform stationarity holds despite periodicity");
        assert_eq!(report.period, Some(4));
    }

    #[test]
    fn verify_uniform_stationarity_flags_disconnected_input() {
        let h = Hypergraph::from_lists(&[&[1, 2], &[3, 4]]).unwrap();
        let report = verify_uniform_stationarity(&h, 1e-12).unwrap();
        assert!(!report.connected);
        assert!(!report.pass);
        assert_eq!(report.column_sum_max_dev, None);
    }

    #[test]
    fn oversized_input_is_refused() {
        // A path of half a million two-node hyperedges crosses the
        // million-pair analysis limit.
        let m = MAX_STATES / 2 + 1;
        let lists: Vec<Vec<u64>> = (0..m as u64).map(|k| vec![k, k + 1]).collect();
        let borrowed: Vec<&[u64]> = lists.iter().map(Vec::as_slice).collect();
        let h = Hypergraph::from_lists(&borrowed).unwrap();
        assert!(matches!(
            verify_uniform_stationarity(&h, 1e-12),
            Err(MarkovError::TooLarge(_))
        ));
        assert!(matches!(
            build_nb_ho_matrix(&h),
            Err(MarkovError::TooLarge(_))
        ));
    }

    #[test]
    fn empirical_matches_exact_on_deterministic_chain() {
        let cmp = empirical_vs_exact(&path(), WalkKind::NonBacktracking, 500, 1, 7).unwrap();
        assert_eq!(cmp.max_abs_dev, 0.0);
        assert_eq!(cmp.transitions, 499);
    }

    #[test]
    fn empirical_approaches_exact_on_h_tri() {
        let h = h_tri();
        let cmp = empirical_vs_exact(&h, WalkKind::NonBacktracking, 40_000, 2, 11).unwrap();
        assert!(cmp.max_abs_dev < 0.05, "pair dev {}", cmp.max_abs_dev);
        let cmp = empirical_vs_exact(&h, WalkKind::HigherOrder, 40_000, 2, 11).unwrap();
        assert!(cmp.max_abs_dev < 0.05, "node dev {}", cmp.max_abs_dev);
    }

    #[test]
    fn too_short_walks_are_rejected() {
        assert!(matches!(
            empirical_vs_exact(&h_tri(), WalkKind::HigherOrder, 1, 1, 0),
            Err(MarkovError::InsufficientVisits { .. })
        ));
    }

    #[test]
    fn coordinate_dump_lists_nonzeros() {
        let m = ChainMatrix::from_rows(vec![vec![(1, 1.0)], vec![(0, 0.5), (1, 0.5)]]);
        assert_eq!(m.coordinate_dump(), "0 1 1\n1 0 0.5\n1 1 0.5\n");
    }
}
