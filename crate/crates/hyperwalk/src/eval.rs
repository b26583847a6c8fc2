//! Experiment harness: repeated independent walks against known ground
//! truth.
//!
//! The protocol: run each walk kind `runs` times at every length in an
//! ascending `r` grid, estimate the requested properties from each run,
//! score them against exact full-snapshot values, and aggregate per-cell
//! NRMSE (the square root of the mean squared per-run error). Scalar
//! properties score by relative error, distributions by L1 distance.
//!
//! Run `k` draws its RNG from substream `k` of the master seed and starts
//! at a fresh uniformly chosen seed node, so results are reproducible and
//! independent of scheduling; all lengths in the grid are evaluated on
//! prefixes of one maximal-length walk per run, which is distributionally
//! identical to independent runs and keeps large grids affordable.

use std::collections::BTreeMap;

use rand::distr::Distribution as _;
use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::estimate::{
    estimate_distribution, estimate_hyperedge, estimate_node, Distribution, DistributionForm,
    EstimateError,
};
use crate::hypergraph::{BuildError, Hypergraph, NodeId};
use crate::oracle::InMemoryOracle;
use crate::rng::{choose_index, substream};
use crate::walk::{drive_walk, hyperedge_repetition_rate, Step, WalkError, WalkKind};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),
    #[error("relative error undefined: ground truth is zero")]
    ZeroTruth,
    #[error("cannot compare a scalar estimate with a distribution")]
    ShapeMismatch,
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParameters(String),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Estimable properties with exact full-snapshot counterparts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    MeanDegree,
    MeanSize,
    DegreePmf,
    SizePmf,
    DegreeCcdf,
    SizeCcdf,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::MeanDegree,
        Property::MeanSize,
        Property::DegreePmf,
        Property::SizePmf,
        Property::DegreeCcdf,
        Property::SizeCcdf,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Property::MeanDegree => "mean-degree",
            Property::MeanSize => "mean-size",
            Property::DegreePmf => "degree-pmf",
            Property::SizePmf => "size-pmf",
            Property::DegreeCcdf => "degree-ccdf",
            Property::SizeCcdf => "size-ccdf",
        }
    }
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mean-degree" | "avg-degree" => Ok(Property::MeanDegree),
            "mean-size" | "avg-size" => Ok(Property::MeanSize),
            "degree-pmf" => Ok(Property::DegreePmf),
            "size-pmf" => Ok(Property::SizePmf),
            "degree-ccdf" => Ok(Property::DegreeCcdf),
            "size-ccdf" => Ok(Property::SizeCcdf),
            other => Err(format!("unknown property {other:?}")),
        }
    }
}

/// A scalar or a distribution over integer support; the common currency of
/// estimates and ground truths.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum PropertyValue {
    Scalar(f64),
    Distribution(BTreeMap<u32, f64>),
}

/// Exact property value by direct enumeration of the full hypergraph.
pub fn ground_truth(h: &Hypergraph, property: Property) -> PropertyValue {
    let degrees = || (0..h.node_count() as NodeId).map(|i| h.degree(i).unwrap());
    let sizes = || (0..h.hyperedge_count() as u32).map(|a| h.size(a).unwrap());
    match property {
        Property::MeanDegree => PropertyValue::Scalar(
            degrees().map(f64::from).sum::<f64>() / h.node_count() as f64,
        ),
        Property::MeanSize => PropertyValue::Scalar(
            sizes().map(f64::from).sum::<f64>() / h.hyperedge_count() as f64,
        ),
        Property::DegreePmf => PropertyValue::Distribution(exact_pmf(degrees())),
        Property::SizePmf => PropertyValue::Distribution(exact_pmf(sizes())),
        Property::DegreeCcdf => {
            PropertyValue::Distribution(pmf_to_ccdf(exact_pmf(degrees())))
        }
        Property::SizeCcdf => PropertyValue::Distribution(pmf_to_ccdf(exact_pmf(sizes()))),
    }
}

fn exact_pmf(values: impl Iterator<Item = u32>) -> BTreeMap<u32, f64> {
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    let mut total = 0u64;
    for v in values {
        *counts.entry(v).or_insert(0) += 1;
        total += 1;
    }
    counts
        .into_iter()
        .map(|(v, c)| (v, c as f64 / total as f64))
        .collect()
}

fn pmf_to_ccdf(pmf: BTreeMap<u32, f64>) -> BTreeMap<u32, f64> {
    let mut ccdf = pmf;
    let mut acc = 0.0;
    for v in ccdf.values_mut().rev() {
        acc += *v;
        *v = acc;
    }
    ccdf
}

/// Relative error `|estimate - truth| / truth`; undefined for zero truth.
pub fn relative_error(estimate: f64, truth: f64) -> Result<f64, EvalError> {
    if truth == 0.0 {
        return Err(EvalError::ZeroTruth);
    }
    Ok((estimate - truth).abs() / truth.abs())
}

/// L1 distance over the union of supports; symmetric, at most 2 for pmfs.
pub fn l1_distance(p: &BTreeMap<u32, f64>, q: &BTreeMap<u32, f64>) -> f64 {
    let mut total = 0.0;
    for (v, pv) in p {
        total += (pv - q.get(v).copied().unwrap_or(0.0)).abs();
    }
    for (v, qv) in q {
        if !p.contains_key(v) {
            total += qv.abs();
        }
    }
    total
}

/// Per-run error: relative error for scalars, L1 for distributions.
pub fn error_between(estimate: &PropertyValue, truth: &PropertyValue) -> Result<f64, EvalError> {
    match (estimate, truth) {
        (PropertyValue::Scalar(e), PropertyValue::Scalar(t)) => relative_error(*e, *t),
        (PropertyValue::Distribution(e), PropertyValue::Distribution(t)) => {
            Ok(l1_distance(e, t))
        }
        _ => Err(EvalError::ShapeMismatch),
    }
}

/// Estimates one property from a walk prefix.
pub fn estimate_property(
    steps: &[Step],
    burn_in: u64,
    property: Property,
) -> Result<PropertyValue, EvalError> {
    let value = match property {
        Property::MeanDegree => {
            PropertyValue::Scalar(estimate_node(steps, burn_in, |s| f64::from(s.degree))?.value)
        }
        Property::MeanSize => {
            PropertyValue::Scalar(estimate_hyperedge(steps, burn_in, |s| f64::from(s.size))?.value)
        }
        Property::DegreePmf => PropertyValue::Distribution(estimate_distribution(
            steps,
            burn_in,
            Distribution::Degree,
            DistributionForm::Pmf,
        )?),
        Property::SizePmf => PropertyValue::Distribution(estimate_distribution(
            steps,
            burn_in,
            Distribution::Size,
            DistributionForm::Pmf,
        )?),
        Property::DegreeCcdf => PropertyValue::Distribution(estimate_distribution(
            steps,
            burn_in,
            Distribution::Degree,
            DistributionForm::Ccdf,
        )?),
        Property::SizeCcdf => PropertyValue::Distribution(estimate_distribution(
            steps,
            burn_in,
            Distribution::Size,
            DistributionForm::Ccdf,
        )?),
    };
    Ok(value)
}

/// One full experiment: which walks to compare, at which lengths, how many
/// runs, and which properties to score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// Label echoed into result rows; not interpreted.
    pub dataset: String,
    pub walks: Vec<WalkKind>,
    /// Ascending walk lengths; larger lengths reuse the same walks' prefixes.
    pub r_grid: Vec<u64>,
    pub runs: u64,
    pub properties: Vec<Property>,
    pub seed: u64,
    #[serde(default)]
    pub burn_in: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), EvalError> {
        let fail = |msg: &str| Err(EvalError::InvalidSpec(msg.to_string()));
        if self.walks.is_empty() {
            return fail("at least one walk kind is required");
        }
        if self.r_grid.is_empty() {
            return fail("at least one walk length is required");
        }
        if !self.r_grid.windows(2).all(|w| w[0] < w[1]) {
            return fail("walk lengths must be strictly ascending");
        }
        if self.runs < 1 {
            return fail("runs must be at least 1");
        }
        if self.burn_in >= self.r_grid[0] {
            return fail("burn-in must be smaller than the shortest walk length");
        }
        Ok(())
    }

    /// Parses the `key = value` experiment config format. Keys: `dataset`,
    /// `walks`, `r`, `runs`, `properties`, `seed`, `burn_in`; lists are
    /// comma-separated; `#` starts a comment.
    pub fn parse(text: &str) -> Result<ExperimentSpec, EvalError> {
        let bad = |msg: String| EvalError::InvalidSpec(msg);
        let mut dataset = None;
        let mut walks = None;
        let mut r_grid = None;
        let mut runs = None;
        let mut properties = None;
        let mut seed = None;
        let mut burn_in = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let list = || value.split(',').map(str::trim).filter(|t| !t.is_empty());
            match key {
                "dataset" => dataset = Some(value.to_string()),
                "walks" => {
                    walks = Some(
                        list()
                            .map(|t| t.parse::<WalkKind>())
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(bad)?,
                    )
                }
                "r" => {
                    r_grid = Some(
                        list()
                            .map(|t| {
                                t.parse::<u64>()
                                    .map_err(|_| bad(format!("bad walk length {t:?}")))
                            })
                            .collect::<Result<Vec<_>, _>>()?,
                    )
                }
                "runs" => {
                    runs = Some(
                        value
                            .parse::<u64>()
                            .map_err(|_| bad(format!("bad run count {value:?}")))?,
                    )
                }
                "properties" => {
                    properties = Some(
                        list()
                            .map(|t| t.parse::<Property>())
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(bad)?,
                    )
                }
                "seed" => {
                    seed = Some(
                        value
                            .parse::<u64>()
                            .map_err(|_| bad(format!("bad seed {value:?}")))?,
                    )
                }
                "burn_in" => {
                    burn_in = Some(
                        value
                            .parse::<u64>()
                            .map_err(|_| bad(format!("bad burn-in {value:?}")))?,
                    )
                }
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        let spec = ExperimentSpec {
            dataset: dataset.unwrap_or_else(|| "dataset".to_string()),
            walks: walks.ok_or_else(|| bad("missing key: walks".into()))?,
            r_grid: r_grid.ok_or_else(|| bad("missing key: r".into()))?,
            runs: runs.ok_or_else(|| bad("missing key: runs".into()))?,
            properties: properties.ok_or_else(|| bad("missing key: properties".into()))?,
            seed: seed.unwrap_or(0),
            burn_in: burn_in.unwrap_or(0),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Renders the spec back in the config format, for echoing into outputs.
    pub fn to_config_string(&self) -> String {
        let join = |items: Vec<String>| items.join(", ");
        format!(
            "dataset = {}\nwalks = {}\nr = {}\nruns = {}\nproperties = {}\nseed = {}\nburn_in = {}\n",
            self.dataset,
            join(self.walks.iter().map(|w| w.to_string()).collect()),
            join(self.r_grid.iter().map(|r| r.to_string()).collect()),
            self.runs,
            join(self.properties.iter().map(|p| p.to_string()).collect()),
            self.seed,
            self.burn_in,
        )
    }
}

/// NRMSE for one (walk, length, property) cell.
#[derive(Debug, Clone, Serialize)]
pub struct NrmseCell {
    pub dataset: String,
    pub walk: WalkKind,
    pub r: u64,
    pub property: Property,
    pub nrmse: f64,
    pub runs: u64,
    /// Raw per-run errors, ordered by run index.
    pub errors: Vec<f64>,
}

/// All cells of one experiment plus the recorded per-run seed nodes.
#[derive(Debug, Clone, Serialize)]
pub struct NrmseResultSet {
    pub cells: Vec<NrmseCell>,
    pub start_nodes: Vec<NodeId>,
}

impl NrmseResultSet {
    pub fn cell(&self, walk: WalkKind, r: u64, property: Property) -> Option<&NrmseCell> {
        self.cells
            .iter()
            .find(|c| c.walk == walk && c.r == r && c.property == property)
    }
}

struct RunOutput<T> {
    start_node: NodeId,
    per_walk: Vec<T>,
}

/// Runs every configured walk once per run index; run `k` uses RNG
/// substream `k`, starting each walk kind from the same freshly drawn seed
/// node so kinds are compared on common randomness.
fn per_run_walks<T, F>(
    h: &Hypergraph,
    walks: &[WalkKind],
    r_max: u64,
    runs: u64,
    seed: u64,
    eval: F,
) -> Result<Vec<RunOutput<T>>, EvalError>
where
    T: Send,
    F: Fn(WalkKind, &[Step]) -> Result<T, EvalError> + Sync,
{
    (0..runs)
        .into_par_iter()
        .map(|k| {
            let mut per_walk = Vec::with_capacity(walks.len());
            let mut start_node = 0;
            for &kind in walks {
                let mut rng = substream(seed, k);
                let start = choose_index(&mut rng, h.node_count()) as NodeId;
                start_node = start;
                let mut oracle = InMemoryOracle::new(h);
                let (steps, _) = drive_walk(&mut oracle, kind, r_max, start, &mut rng)?;
                per_walk.push(eval(kind, &steps)?);
            }
            Ok(RunOutput {
                start_node,
                per_walk,
            })
        })
        .collect()
}

/// Runs the NRMSE protocol for a spec against a fully known hypergraph.
pub fn run_nrmse_experiment(
    h: &Hypergraph,
    spec: &ExperimentSpec,
) -> Result<NrmseResultSet, EvalError> {
    spec.validate()?;
    if spec.properties.is_empty() {
        return Err(EvalError::InvalidSpec(
            "at least one property is required".into(),
        ));
    }
    let truths: Vec<PropertyValue> = spec
        .properties
        .iter()
        .map(|&p| ground_truth(h, p))
        .collect();
    let r_max = *spec.r_grid.last().unwrap();
    let per_run = per_run_walks(h, &spec.walks, r_max, spec.runs, spec.seed, |_, steps| {
        let mut errs = Vec::with_capacity(spec.r_grid.len() * spec.properties.len());
        for &r in &spec.r_grid {
            let prefix = &steps[..r as usize];
            for (pi, &property) in spec.properties.iter().enumerate() {
                let est = estimate_property(prefix, spec.burn_in, property)?;
                errs.push(error_between(&est, &truths[pi])?);
            }
        }
        Ok(errs)
    })?;

    let mut cells = Vec::new();
    for (wi, &walk) in spec.walks.iter().enumerate() {
        for (ri, &r) in spec.r_grid.iter().enumerate() {
            for (pi, &property) in spec.properties.iter().enumerate() {
                let idx = ri * spec.properties.len() + pi;
                let errors: Vec<f64> = per_run.iter().map(|run| run.per_walk[wi][idx]).collect();
                let nrmse =
                    (errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64).sqrt();
                cells.push(NrmseCell {
                    dataset: spec.dataset.clone(),
                    walk,
                    r,
                    property,
                    nrmse,
                    runs: spec.runs,
                    errors,
                });
            }
        }
    }
    Ok(NrmseResultSet {
        cells,
        start_nodes: per_run.iter().map(|run| run.start_node).collect(),
    })
}

/// Mean query counts and hyperedge repetition rate for one (walk, length)
/// cell, averaged over runs.
#[derive(Debug, Clone, Serialize)]
pub struct QueryComparison {
    pub dataset: String,
    pub walk: WalkKind,
    pub r: u64,
    pub runs: u64,
    pub mean_node_queries: f64,
    pub mean_hyperedge_queries: f64,
    pub mean_repetition_rate: f64,
}

/// Query charges a length-`r` prefix would have incurred: `r` node queries
/// always; `r` hyperedge queries for the uniform walks, the sum of visited
/// degrees for the weighted walks (each candidate must be queried).
pub fn prefix_query_charges(kind: WalkKind, steps: &[Step]) -> (u64, u64) {
    let node = steps.len() as u64;
    let hyperedge = match kind {
        WalkKind::HigherOrder | WalkKind::NonBacktracking => node,
        WalkKind::Projected | WalkKind::Carletti => {
            steps.iter().map(|s| u64::from(s.degree)).sum()
        }
    };
    (node, hyperedge)
}

/// Averages query counts and repetition rates over the spec's runs.
/// `properties` and `burn_in` are ignored; lengths below 2 are rejected
/// because a repetition rate needs at least two samples.
pub fn compare_queries_and_repetition(
    h: &Hypergraph,
    spec: &ExperimentSpec,
) -> Result<Vec<QueryComparison>, EvalError> {
    spec.validate()?;
    if spec.r_grid[0] < 2 {
        return Err(EvalError::InvalidSpec(
            "repetition rates need walk lengths of at least 2".into(),
        ));
    }
    let r_max = *spec.r_grid.last().unwrap();
    let per_run = per_run_walks(h, &spec.walks, r_max, spec.runs, spec.seed, |kind, steps| {
        spec.r_grid
            .iter()
            .map(|&r| {
                let prefix = &steps[..r as usize];
                let (node_q, hyper_q) = prefix_query_charges(kind, prefix);
                let rep = hyperedge_repetition_rate(prefix)?;
                Ok((node_q, hyper_q, rep))
            })
            .collect::<Result<Vec<_>, EvalError>>()
    })?;

    let mut rows = Vec::new();
    for (wi, &walk) in spec.walks.iter().enumerate() {
        for (ri, &r) in spec.r_grid.iter().enumerate() {
            let mut node_q = 0.0;
            let mut hyper_q = 0.0;
            let mut rep = 0.0;
            for run in &per_run {
                let (n, h, p) = run.per_walk[wi][ri];
                node_q += n as f64;
                hyper_q += h as f64;
                rep += p;
            }
            let runs = spec.runs as f64;
            rows.push(QueryComparison {
                dataset: spec.dataset.clone(),
                walk,
                r,
                runs: spec.runs,
                mean_node_queries: node_q / runs,
                mean_hyperedge_queries: hyper_q / runs,
                mean_repetition_rate: rep / runs,
            });
        }
    }
    Ok(rows)
}

/// NRMSE per support value of a degree or size pmf, scored by relative
/// error at each value the true pmf supports. Feeds per-value accuracy
/// tables; values never observed in a run estimate as probability 0.
#[derive(Debug, Clone, Serialize)]
pub struct PerValueNrmse {
    pub dataset: String,
    pub walk: WalkKind,
    pub r: u64,
    pub value: u32,
    pub nrmse: f64,
    pub runs: u64,
}

pub fn per_value_nrmse(
    h: &Hypergraph,
    spec: &ExperimentSpec,
    which: Distribution,
) -> Result<Vec<PerValueNrmse>, EvalError> {
    spec.validate()?;
    let truth = match which {
        Distribution::Degree => ground_truth(h, Property::DegreePmf),
        Distribution::Size => ground_truth(h, Property::SizePmf),
    };
    let PropertyValue::Distribution(truth) = truth else {
        unreachable!()
    };
    let support: Vec<(u32, f64)> = truth.into_iter().collect();
    let r_max = *spec.r_grid.last().unwrap();
    let per_run = per_run_walks(h, &spec.walks, r_max, spec.runs, spec.seed, |_, steps| {
        spec.r_grid
            .iter()
            .map(|&r| {
                let pmf = estimate_distribution(
                    &steps[..r as usize],
                    spec.burn_in,
                    which,
                    DistributionForm::Pmf,
                )?;
                support
                    .iter()
                    .map(|&(v, t)| {
                        relative_error(pmf.get(&v).copied().unwrap_or(0.0), t)
                    })
                    .collect::<Result<Vec<f64>, _>>()
            })
            .collect::<Result<Vec<_>, EvalError>>()
    })?;

    let mut rows = Vec::new();
    for (wi, &walk) in spec.walks.iter().enumerate() {
        for (ri, &r) in spec.r_grid.iter().enumerate() {
            for (vi, &(value, _)) in support.iter().enumerate() {
                let mean_sq = per_run
                    .iter()
                    .map(|run| run.per_walk[wi][ri][vi].powi(2))
                    .sum::<f64>()
                    / spec.runs as f64;
                rows.push(PerValueNrmse {
                    dataset: spec.dataset.clone(),
                    walk,
                    r,
                    value,
                    nrmse: mean_sq.sqrt(),
                    runs: spec.runs,
                });
            }
        }
    }
    Ok(rows)
}

pub fn nrmse_csv(cells: &[NrmseCell]) -> String {
    let mut out = String::from("dataset,walk,r,metric,nrmse,runs\n");
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.dataset, c.walk, c.r, c.property, c.nrmse, c.runs
        ));
    }
    out
}

pub fn queries_csv(rows: &[QueryComparison]) -> String {
    let mut out =
        String::from("dataset,walk,r,runs,mean_node_queries,mean_hyperedge_queries,mean_repetition_rate\n");
    for q in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            q.dataset,
            q.walk,
            q.r,
            q.runs,
            q.mean_node_queries,
            q.mean_hyperedge_queries,
            q.mean_repetition_rate
        ));
    }
    out
}

pub fn per_value_csv(rows: &[PerValueNrmse]) -> String {
    let mut out = String::from("dataset,walk,r,value,nrmse,runs\n");
    for p in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            p.dataset, p.walk, p.r, p.value, p.nrmse, p.runs
        ));
    }
    out
}

/// Hyperedge size law for the synthetic generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeLaw {
    Fixed(u32),
    /// Uniform over `min..=max` inclusive.
    Uniform { min: u32, max: u32 },
}

/// Parameters for [`generate_random_hypergraph`].
#[derive(Debug, Clone, Copy)]
pub struct GeneratorParams {
    /// Node pool size. When the hyperedges offer at least this many member
    /// slots, every pool node appears; otherwise only sampled ones do.
    pub nodes: usize,
    pub hyperedges: usize,
    pub size_law: SizeLaw,
    /// Zipf exponent for member sampling: node `i` is drawn with weight
    /// `(i + 1)^-skew`. Zero means uniform; larger values concentrate
    /// membership on low-index hubs and leave many degree-1 nodes.
    pub degree_skew: f64,
    pub seed: u64,
}

/// Generates a connected random hypergraph. Construction: draw sizes from
/// the size law; the first hyperedge takes fresh pool nodes; every later
/// hyperedge reserves one slot for a degree-proportional pick among already
/// placed members, which links it to an earlier hyperedge and makes the
/// whole hypergraph connected by induction. Remaining slots take fresh
/// shuffled pool nodes while any are left, then (skew-)weighted samples, so
/// all `nodes` pool nodes appear whenever the slot capacity net of the
/// linking slots reaches the pool size.
pub fn generate_random_hypergraph(params: &GeneratorParams) -> Result<Hypergraph, EvalError> {
    let fail = |msg: String| Err(EvalError::InfeasibleParameters(msg));
    if params.nodes < 2 {
        return fail(format!("need at least 2 nodes, got {}", params.nodes));
    }
    if params.hyperedges < 1 {
        return fail("need at least 1 hyperedge".into());
    }
    let (min_size, max_size) = match params.size_law {
        SizeLaw::Fixed(s) => (s, s),
        SizeLaw::Uniform { min, max } => (min, max),
    };
    if min_size < 2 {
        return fail(format!("hyperedge sizes must be at least 2, got {min_size}"));
    }
    if max_size < min_size {
        return fail(format!("empty size range {min_size}..={max_size}"));
    }
    if max_size as usize > params.nodes {
        return fail(format!(
            "size {max_size} exceeds the {}-node pool",
            params.nodes
        ));
    }
    if !(params.degree_skew.is_finite() && params.degree_skew >= 0.0) {
        return fail(format!(
            "degree skew must be finite and >= 0, got {}",
            params.degree_skew
        ));
    }

    let mut rng = substream(params.seed, 0);
    let sizes: Vec<u32> = (0..params.hyperedges)
        .map(|_| match params.size_law {
            SizeLaw::Fixed(s) => s,
            SizeLaw::Uniform { min, max } => rng.random_range(min..=max),
        })
        .collect();

    let mut pool: Vec<u64> = (0..params.nodes as u64).collect();
    pool.shuffle(&mut rng);
    let mut fresh = pool.into_iter();

    let weights: Vec<f64> = (0..params.nodes)
        .map(|i| ((i + 1) as f64).powf(-params.degree_skew))
        .collect();
    let sampler =
        rand::distr::weighted::WeightedIndex::new(&weights).expect("positive weights");

    // Every placed member, repeated once per placement: uniform picks from
    // this list link proportionally to current degree.
    let mut placed: Vec<u64> = Vec::new();
    let mut members: Vec<Vec<u64>> = Vec::with_capacity(params.hyperedges);
    for (t, &s) in sizes.iter().enumerate() {
        let mut edge: Vec<u64> = Vec::with_capacity(s as usize);
        if t > 0 {
            edge.push(placed[choose_index(&mut rng, placed.len())]);
        }
        while edge.len() < s as usize {
            if let Some(node) = fresh.next() {
                // Fresh pool nodes are distinct from everything placed so
                // far, so the only possible duplicate is the link member —
                // impossible, since links are previously placed nodes.
                edge.push(node);
                continue;
            }
            // Pool exhausted: weighted draws with rejection for in-edge
            // distinctness. Sizes are capped by the pool, so an unused
            // candidate always exists; bounded fuel guards extreme skew.
            let mut fuel = 200 + 20 * params.nodes;
            let node = loop {
                let candidate = sampler.sample(&mut rng) as u64;
                if !edge.contains(&candidate) {
                    break candidate;
                }
                fuel -= 1;
                if fuel == 0 {
                    break (0..params.nodes as u64)
                        .find(|c| !edge.contains(c))
                        .expect("pool larger than any hyperedge");
                }
            };
            edge.push(node);
        }
        placed.extend_from_slice(&edge);
        edge.sort_unstable();
        members.push(edge);
    }

    let borrowed: Vec<&[u64]> = members.iter().map(Vec::as_slice).collect();
    let h = Hypergraph::from_lists(&borrowed)?;
    debug_assert!(h.is_connected());
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h_tri() -> Hypergraph {
        Hypergraph::from_lists(&[&[1, 2, 3], &[2, 3]]).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn ground_truth_on_h_tri() {
        let h = h_tri();
        let PropertyValue::Scalar(d) = ground_truth(&h, Property::MeanDegree) else {
            panic!()
        };
        assert!(close(d, 5.0 / 3.0));
        let PropertyValue::Scalar(s) = ground_truth(&h, Property::MeanSize) else {
            panic!()
        };
        assert!(close(s, 5.0 / 2.0));
        let PropertyValue::Distribution(pmf) = ground_truth(&h, Property::DegreePmf) else {
            panic!()
        };
        assert!(close(pmf[&1], 1.0 / 3.0));
        assert!(close(pmf[&2], 2.0 / 3.0));
        let PropertyValue::Distribution(ccdf) = ground_truth(&h, Property::SizeCcdf) else {
            panic!()
        };
        assert!(close(ccdf[&2], 1.0));
        assert!(close(ccdf[&3], 0.5));
    }

    #[test]
    fn error_metrics() {
        assert!(close(relative_error(5.5, 5.0).unwrap(), 0.1));
        assert!(close(relative_error(5.0, 5.0).unwrap(), 0.0));
        assert!(matches!(relative_error(1.0, 0.0), Err(EvalError::ZeroTruth)));

        let p = BTreeMap::from([(1, 0.4), (2, 0.6)]);
        let q = BTreeMap::from([(1, 0.5), (2, 0.5)]);
        assert!(close(l1_distance(&p, &q), 0.2));
        assert!(close(l1_distance(&q, &p), 0.2));
        // Disjoint supports: the distance counts both masses in full.
        let r = BTreeMap::from([(9, 1.0)]);
        assert!(close(l1_distance(&p, &r), 2.0));

        assert!(matches!(
            error_between(&PropertyValue::Scalar(1.0), &ground_truth(&h_tri(), Property::DegreePmf)),
            Err(EvalError::ShapeMismatch)
        ));
    }

    #[test]
    fn spec_parsing_round_trip() {
        let text = "# comparison on the triangle\ndataset = tri\nwalks = ho-rw, nb-ho-rw\nr = 100, 1000\nruns = 10\nproperties = mean-degree, size-pmf\nseed = 5\nburn_in = 10\n";
        let spec = ExperimentSpec::parse(text).unwrap();
        assert_eq!(spec.dataset, "tri");
        assert_eq!(spec.walks, vec![WalkKind::HigherOrder, WalkKind::NonBacktracking]);
        assert_eq!(spec.r_grid, vec![100, 1000]);
        assert_eq!(spec.runs, 10);
        assert_eq!(spec.properties, vec![Property::MeanDegree, Property::SizePmf]);
        assert_eq!(spec.seed, 5);
        assert_eq!(spec.burn_in, 10);
        assert_eq!(ExperimentSpec::parse(&spec.to_config_string()).unwrap(), spec);
    }

    #[test]
    fn spec_parsing_rejects_bad_input() {
        assert!(ExperimentSpec::parse("walks = q-rw\nr = 10\nruns = 1\nproperties = mean-degree\n").is_err());
        assert!(ExperimentSpec::parse("walks = ho-rw\nr = 10\nruns = 1\nproperties = mean-degree\nbogus = 1\n").is_err());
        assert!(ExperimentSpec::parse("walks = ho-rw\nruns = 1\nproperties = mean-degree\n").is_err());
        // Descending grid violates the ascending invariant.
        assert!(ExperimentSpec::parse("walks = ho-rw\nr = 100, 10\nruns = 1\nproperties = mean-degree\n").is_err());
        // Burn-in must leave samples at the shortest length.
        assert!(ExperimentSpec::parse("walks = ho-rw\nr = 10\nruns = 1\nproperties = mean-degree\nburn_in = 10\n").is_err());
    }

    fn small_spec() -> ExperimentSpec {
        ExperimentSpec {
            dataset: "tri".into(),
            walks: vec![WalkKind::HigherOrder, WalkKind::NonBacktracking],
            r_grid: vec![30, 3000],
            runs: 40,
            properties: vec![Property::MeanDegree, Property::DegreePmf],
            seed: 11,
            burn_in: 0,
        }
    }

    #[test]
    fn nrmse_experiment_shape_and_definition() {
        let h = h_tri();
        let spec = small_spec();
        let result = run_nrmse_experiment(&h, &spec).unwrap();
        assert_eq!(result.cells.len(), 2 * 2 * 2);
        assert_eq!(result.start_nodes.len(), 40);
        for cell in &result.cells {
            assert_eq!(cell.errors.len(), 40);
            assert!(cell.nrmse >= 0.0);
            let mean_sq = cell.errors.iter().map(|e| e * e).sum::<f64>() / 40.0;
            assert!(close(cell.nrmse, mean_sq.sqrt()));
        }
        // Longer walks estimate better on every cell of this grid.
        for walk in [WalkKind::HigherOrder, WalkKind::NonBacktracking] {
            for property in [Property::MeanDegree, Property::DegreePmf] {
                let short = result.cell(walk, 30, property).unwrap().nrmse;
                let long = result.cell(walk, 3000, property).unwrap().nrmse;
                assert!(long < short, "{walk}/{property}: {long} !< {short}");
            }
        }
    }

    #[test]
    fn nrmse_experiment_is_deterministic() {
        let h = h_tri();
        let spec = ExperimentSpec { runs: 8, ..small_spec() };
        let a = run_nrmse_experiment(&h, &spec).unwrap();
        let b = run_nrmse_experiment(&h, &spec).unwrap();
        for (x, y) in a.cells.iter().zip(&b.cells) {
            assert_eq!(x.errors, y.errors);
        }
        assert_eq!(a.start_nodes, b.start_nodes);
    }

    #[test]
    fn exact_estimates_give_zero_nrmse() {
        // Every degree and size equals 2, so the ratio estimates are exact
        // and each per-run error is 0 even for a single run.
        let h = Hypergraph::from_lists(&[&[1, 2], &[2, 3], &[3, 1]]).unwrap();
        let spec = ExperimentSpec {
            dataset: "cycle".into(),
            walks: vec![WalkKind::Projected],
            r_grid: vec![10],
            runs: 1,
            properties: vec![Property::MeanDegree, Property::MeanSize],
            seed: 0,
            burn_in: 0,
        };
        let result = run_nrmse_experiment(&h, &spec).unwrap();
        for cell in &result.cells {
            assert_eq!(cell.nrmse, 0.0);
            assert_eq!(cell.errors, vec![0.0]);
        }
    }

    #[test]
    fn relabeling_preserves_per_run_errors() {
        let lists: [&[u64]; 4] = [&[1, 2, 3], &[2, 3], &[3, 4], &[4, 5]];
        let h = Hypergraph::from_lists(&lists).unwrap();
        // Same structure, same hyperedge order, renamed labels: internal
        // ids and therefore every walk decision stay identical.
        let renamed: Vec<Vec<String>> = lists
            .iter()
            .map(|e| e.iter().map(|v| format!("node-{v}")).collect())
            .collect();
        let h2 = Hypergraph::build(&renamed).unwrap();
        let spec = ExperimentSpec { runs: 6, ..small_spec() };
        let a = run_nrmse_experiment(&h, &spec).unwrap();
        let b = run_nrmse_experiment(&h2, &spec).unwrap();
        for (x, y) in a.cells.iter().zip(&b.cells) {
            assert_eq!(x.errors, y.errors);
        }
    }

    #[test]
    fn query_comparison_matches_the_discipline() {
        let h = h_tri();
        let spec = ExperimentSpec {
            walks: vec![
                WalkKind::Projected,
                WalkKind::HigherOrder,
                WalkKind::NonBacktracking,
            ],
            r_grid: vec![50, 500],
            runs: 12,
            properties: vec![Property::MeanDegree],
            ..small_spec()
        };
        let rows = compare_queries_and_repetition(&h, &spec).unwrap();
        for &r in &spec.r_grid {
            let row = |walk| {
                rows.iter()
                    .find(|q| q.walk == walk && q.r == r)
                    .unwrap()
            };
            let ho = row(WalkKind::HigherOrder);
            let nb = row(WalkKind::NonBacktracking);
            // The uniform walks issue exactly r node and r hyperedge queries.
            assert_eq!(ho.mean_node_queries, r as f64);
            assert_eq!(ho.mean_hyperedge_queries, r as f64);
            assert_eq!(nb.mean_hyperedge_queries, ho.mean_hyperedge_queries);
            // The projected walk pays the degree of every visited node.
            let p = row(WalkKind::Projected);
            assert!(p.mean_hyperedge_queries > r as f64);
            assert!(p.mean_hyperedge_queries < 2.0 * r as f64);
            // H_tri has a degree-1 node, so forced backtracking makes the
            // non-backtracking walk repeat strictly less than HO-RW.
            assert!(nb.mean_repetition_rate < ho.mean_repetition_rate);
        }
    }

    #[test]
    fn per_value_nrmse_shrinks_with_length() {
        let h = h_tri();
        let spec = ExperimentSpec { runs: 30, ..small_spec() };
        let rows = per_value_nrmse(&h, &spec, Distribution::Degree).unwrap();
        // Two support values (degrees 1 and 2) per (walk, r) cell.
        assert_eq!(rows.len(), 2 * 2 * 2);
        for walk in spec.walks {
            for value in [1u32, 2] {
                let at = |r| {
                    rows.iter()
                        .find(|p| p.walk == walk && p.r == r && p.value == value)
                        .unwrap()
                        .nrmse
                };
                assert!(at(3000) < at(30));
            }
        }
    }

    #[test]
    fn csv_rendering() {
        let cells = [NrmseCell {
            dataset: "tri".into(),
            walk: WalkKind::HigherOrder,
            r: 100,
            property: Property::MeanDegree,
            nrmse: 0.25,
            runs: 10,
            errors: vec![],
        }];
        assert_eq!(
            nrmse_csv(&cells),
            "dataset,walk,r,metric,nrmse,runs\ntri,ho-rw,100,mean-degree,0.25,10\n"
        );
        let rows = [QueryComparison {
            dataset: "tri".into(),
            walk: WalkKind::Projected,
            r: 100,
            runs: 10,
            mean_node_queries: 100.0,
            mean_hyperedge_queries: 166.0,
            mean_repetition_rate: 0.125,
        }];
        assert_eq!(
            queries_csv(&rows),
            "dataset,walk,r,runs,mean_node_queries,mean_hyperedge_queries,mean_repetition_rate\ntri,p-rw,100,10,100,166,0.125\n"
        );
    }

    #[test]
    fn generator_respects_parameters() {
        let params = GeneratorParams {
            nodes: 10,
            hyperedges: 15,
            size_law: SizeLaw::Uniform { min: 2, max: 3 },
            degree_skew: 0.0,
            seed: 42,
        };
        let h = generate_random_hypergraph(&params).unwrap();
        assert!(h.is_connected());
        // 15 hyperedges offer at least 30 slots, so all 10 nodes appear.
        assert_eq!(h.node_count(), 10);
        assert_eq!(h.hyperedge_count(), 15);
        for alpha in 0..15 {
            let s = h.size(alpha).unwrap();
            assert!((2..=3).contains(&s));
        }
    }

    #[test]
    fn generator_special_cases() {
        let single = generate_random_hypergraph(&GeneratorParams {
            nodes: 10,
            hyperedges: 1,
            size_law: SizeLaw::Fixed(3),
            degree_skew: 0.0,
            seed: 1,
        })
        .unwrap();
        assert_eq!(single.hyperedge_count(), 1);
        assert_eq!(single.node_count(), 3);

        let graph_like = generate_random_hypergraph(&GeneratorParams {
            nodes: 12,
            hyperedges: 20,
            size_law: SizeLaw::Fixed(2),
            degree_skew: 0.5,
            seed: 2,
        })
        .unwrap();
        for alpha in 0..20 {
            assert_eq!(graph_like.size(alpha).unwrap(), 2);
        }
        assert!(graph_like.is_connected());
    }

    #[test]
    fn generator_rejects_infeasible_parameters() {
        let base = GeneratorParams {
            nodes: 10,
            hyperedges: 5,
            size_law: SizeLaw::Fixed(3),
            degree_skew: 0.0,
            seed: 0,
        };
        let cases = [
            GeneratorParams { hyperedges: 0, ..base },
            GeneratorParams { nodes: 1, ..base },
            GeneratorParams { size_law: SizeLaw::Fixed(1), ..base },
            GeneratorParams { size_law: SizeLaw::Fixed(11), ..base },
            GeneratorParams { size_law: SizeLaw::Uniform { min: 4, max: 3 }, ..base },
            GeneratorParams { degree_skew: f64::NAN, ..base },
        ];
        for params in cases {
            assert!(matches!(
                generate_random_hypergraph(&params),
                Err(EvalError::InfeasibleParameters(_))
            ));
        }
    }

    #[test]
    fn generator_is_deterministic() {
        let params = GeneratorParams {
            nodes: 30,
            hyperedges: 25,
            size_law: SizeLaw::Uniform { min: 2, max: 4 },
            degree_skew: 1.0,
            seed: 7,
        };
        let a = generate_random_hypergraph(&params).unwrap();
        let b = generate_random_hypergraph(&params).unwrap();
        assert_eq!(a.export(), b.export());
        let c = generate_random_hypergraph(&GeneratorParams { seed: 8, ..params }).unwrap();
        assert_ne!(a.export(), c.export());
    }

    #[test]
    fn generator_can_produce_many_degree_one_nodes() {
        // Slot capacity modestly above the pool size leaves most nodes
        // dealt exactly once, mimicking corpora where degree-1 dominates.
        let params = GeneratorParams {
            nodes: 2000,
            hyperedges: 800,
            size_law: SizeLaw::Uniform { min: 2, max: 6 },
            degree_skew: 0.8,
            seed: 3,
        };
        let h = generate_random_hypergraph(&params).unwrap();
        assert!(h.is_connected());
        assert_eq!(h.node_count(), 2000);
        let degree_one = (0..h.node_count() as NodeId)
            .filter(|&i| h.degree(i) == Some(1))
            .count();
        let fraction = degree_one as f64 / h.node_count() as f64;
        assert!(fraction >= 0.4, "degree-1 fraction {fraction}");
    }
}
