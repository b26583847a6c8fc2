//! Random-walk sampling and estimation for large hypergraphs.
//!
//! The crate targets hypergraphs too large or too access-restricted to
//! snapshot: the only access is a query oracle answering "which hyperedges
//! contain this node?" and "which nodes does this hyperedge contain?".
//! Walkers explore through that interface, and re-weighted ratio
//! estimators turn the visited sequence into unbiased estimates of
//! node and hyperedge properties — means, subset means, degree and size
//! distributions, and category compositions.
//!
//! Four walk kinds share one skeleton and differ in how the next
//! hyperedge is chosen from the current node: projected (`p-rw`) and
//! corrected projected (`c-rw`) walks weight hyperedges by size, the
//! higher-order walk (`ho-rw`) picks uniformly, and its non-backtracking
//! variant (`nb-ho-rw`) additionally avoids reusing the hyperedge it just
//! arrived by whenever the node's degree permits. The walks that weight by
//! size must query every incident hyperedge at each step, so their query
//! cost scales with visited degrees, while the uniform walks pay exactly
//! one node and one hyperedge query per step.
//!
//! Supporting modules build the exact node–hyperedge pair chain for small
//! instances and verify its stationary structure ([`markov`]), score
//! estimates against ground truth over repeated runs ([`eval`]), persist
//! sampled sequences ([`sequence`]), and serve or consume the
//! line-oriented remote query protocol ([`remote`]).

pub mod estimate;
pub mod eval;
pub mod hypergraph;
pub mod io;
pub mod markov;
pub mod oracle;
pub mod remote;
pub mod rng;
pub mod sequence;
pub mod walk;

pub use hypergraph::{EdgeId, Hypergraph, NodeId};
pub use oracle::{BudgetedOracle, InMemoryOracle, Oracle, OracleError, QueryBudget, QueryStats};
pub use walk::{run_walk, SampleSequence, Step, WalkConfig, WalkError, WalkKind};
