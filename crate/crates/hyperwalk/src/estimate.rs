//! Re-weighted ratio estimators over sample sequences.
//!
//! All four walks share one correction scheme: node-level targets weight
//! each step by `1/d`, hyperedge-level targets by `1/s`, and the estimate
//! is the ratio of the weighted feature sum to the weighted count,
//!
//! ```text
//! estimate = phi / psi,   phi = sum f(step) * w,   psi = sum w.
//! ```
//!
//! Restricting a target to a subset keeps the full-population `psi` and
//! masks `phi` with an indicator, so proportions over a partition sum to
//! one by construction. Degree and size distributions reuse the same sums
//! with indicator features.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::walk::Step;

#[derive(Debug, Error, PartialEq)]
pub enum EstimateError {
    #[error("no steps remain after discarding the burn-in prefix")]
    EmptySample,
    #[error("denominator is zero: no retained step matched the restriction")]
    ZeroDenominator,
    #[error("no category assigned for {0}")]
    MissingCategory(String),
}

/// Which side of the incidence a feature is defined on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Node,
    Hyperedge,
}

impl Target {
    fn weight(self, step: &Step) -> f64 {
        match self {
            Target::Node => 1.0 / f64::from(step.degree),
            Target::Hyperedge => 1.0 / f64::from(step.size),
        }
    }
}

/// A ratio estimate with the sums it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub phi: f64,
    pub psi: f64,
    /// Steps retained after the burn-in prefix.
    pub used: usize,
}

fn retained(steps: &[Step], burn_in: u64) -> Result<&[Step], EstimateError> {
    let burn_in = burn_in.min(usize::MAX as u64) as usize;
    if burn_in >= steps.len() {
        return Err(EstimateError::EmptySample);
    }
    Ok(&steps[burn_in..])
}

fn ratio(
    steps: &[Step],
    burn_in: u64,
    target: Target,
    f: impl Fn(&Step) -> f64,
    include: impl Fn(&Step) -> bool,
) -> Result<Estimate, EstimateError> {
    let retained = retained(steps, burn_in)?;
    let mut phi = 0.0;
    let mut psi = 0.0;
    let mut used = 0;
    for step in retained {
        if !include(step) {
            continue;
        }
        let w = target.weight(step);
        phi += f(step) * w;
        psi += w;
        used += 1;
    }
    if psi == 0.0 {
        return Err(EstimateError::ZeroDenominator);
    }
    Ok(Estimate {
        value: phi / psi,
        phi,
        psi,
        used,
    })
}

/// Mean of a node feature over all nodes.
pub fn estimate_node(
    steps: &[Step],
    burn_in: u64,
    f: impl Fn(&Step) -> f64,
) -> Result<Estimate, EstimateError> {
    ratio(steps, burn_in, Target::Node, f, |_| true)
}

/// Mean of a node feature over the nodes selected by `member`.
///
/// The denominator still counts every retained step, so the estimate is the
/// subset's share of the feature mass relative to subset size only when
/// combined externally; what this returns is the population mean of
/// `f * 1{member}` divided by the subset proportion — i.e. the subset mean.
pub fn estimate_node_subset(
    steps: &[Step],
    burn_in: u64,
    f: impl Fn(&Step) -> f64,
    member: impl Fn(&Step) -> bool,
) -> Result<Estimate, EstimateError> {
    ratio(steps, burn_in, Target::Node, f, member)
}

/// Mean of a hyperedge feature over all hyperedges.
pub fn estimate_hyperedge(
    steps: &[Step],
    burn_in: u64,
    f: impl Fn(&Step) -> f64,
) -> Result<Estimate, EstimateError> {
    ratio(steps, burn_in, Target::Hyperedge, f, |_| true)
}

/// Mean of a hyperedge feature over the hyperedges selected by `member`.
pub fn estimate_hyperedge_subset(
    steps: &[Step],
    burn_in: u64,
    f: impl Fn(&Step) -> f64,
    member: impl Fn(&Step) -> bool,
) -> Result<Estimate, EstimateError> {
    ratio(steps, burn_in, Target::Hyperedge, f, member)
}

/// Which distribution to estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    /// Node degree distribution (node-weighted).
    Degree,
    /// Hyperedge size distribution (hyperedge-weighted).
    Size,
}

/// How to report a distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionForm {
    Pmf,
    /// `P(value >= v)` for each observed support point.
    Ccdf,
}

/// Estimates a degree or size distribution over the observed support.
///
/// Every support point shares one denominator, so a pmf sums to one exactly
/// (up to rounding) and a ccdf starts at one at the smallest support point.
pub fn estimate_distribution(
    steps: &[Step],
    burn_in: u64,
    which: Distribution,
    form: DistributionForm,
) -> Result<BTreeMap<u32, f64>, EstimateError> {
    let (target, value): (Target, fn(&Step) -> u32) = match which {
        Distribution::Degree => (Target::Node, |s| s.degree),
        Distribution::Size => (Target::Hyperedge, |s| s.size),
    };
    let retained = retained(steps, burn_in)?;
    let mut mass: BTreeMap<u32, f64> = BTreeMap::new();
    let mut psi = 0.0;
    for step in retained {
        let w = target.weight(step);
        *mass.entry(value(step)).or_insert(0.0) += w;
        psi += w;
    }
    for v in mass.values_mut() {
        *v /= psi;
    }
    if form == DistributionForm::Ccdf {
        // Suffix sums over the support, largest value first.
        let mut acc = 0.0;
        for v in mass.values_mut().rev() {
            acc += *v;
            *v = acc;
        }
    }
    Ok(mass)
}

/// Estimates category proportions over nodes or hyperedges.
///
/// `category` maps each step to the category of its node (or hyperedge);
/// returning `None` aborts with [`EstimateError::MissingCategory`] carrying
/// `describe` of the offending step. Proportions share one denominator and
/// sum to one.
pub fn estimate_composition(
    steps: &[Step],
    burn_in: u64,
    target: Target,
    category: impl Fn(&Step) -> Option<String>,
    describe: impl Fn(&Step) -> String,
) -> Result<BTreeMap<String, f64>, EstimateError> {
    let retained = retained(steps, burn_in)?;
    let mut mass: BTreeMap<String, f64> = BTreeMap::new();
    let mut psi = 0.0;
    for step in retained {
        let cat = category(step).ok_or_else(|| EstimateError::MissingCategory(describe(step)))?;
        let w = target.weight(step);
        *mass.entry(cat).or_insert(0.0) += w;
        psi += w;
    }
    for v in mass.values_mut() {
        *v /= psi;
    }
    Ok(mass)
}

/// Renders a distribution as two-column CSV.
pub fn distribution_csv(dist: &BTreeMap<u32, f64>) -> String {
    let mut out = String::from("value,probability\n");
    for (v, p) in dist {
        out.push_str(&format!("{v},{p}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use crate::oracle::InMemoryOracle;
    use crate::walk::{run_walk, WalkConfig, WalkKind};

    fn triangle_walk(walk: WalkKind, length: u64) -> Vec<Step> {
        let h = Hypergraph::from_lists(&[&[1, 2, 3], &[2, 3]]).unwrap();
        let cfg = WalkConfig {
            walk,
            length,
            seed_node: "1".into(),
            rng_seed: 7,
            stream: 0,
            burn_in: 0,
        };
        run_walk(&mut InMemoryOracle::new(&h), &cfg).unwrap().steps
    }

    #[test]
    fn constant_feature_is_exact() {
        // Phi = c * Psi algebraically, so the ratio is c up to the rounding
        // of the inexact 1/3 weights (a couple of ulps).
        let steps = triangle_walk(WalkKind::Projected, 200);
        let est = estimate_node(&steps, 0, |_| 4.25).unwrap();
        assert!((est.value - 4.25).abs() < 1e-12);
        let est = estimate_hyperedge(&steps, 0, |_| -1.5).unwrap();
        assert!((est.value - -1.5).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs_error() {
        let steps = triangle_walk(WalkKind::HigherOrder, 10);
        assert_eq!(
            estimate_node(&steps, 10, |_| 1.0).unwrap_err(),
            EstimateError::EmptySample
        );
        assert_eq!(
            estimate_node_subset(&steps, 0, |_| 1.0, |_| false).unwrap_err(),
            EstimateError::ZeroDenominator
        );
    }

    #[test]
    fn full_subset_matches_unrestricted() {
        let steps = triangle_walk(WalkKind::Carletti, 500);
        let all = estimate_node(&steps, 0, |s| f64::from(s.degree)).unwrap();
        let subset =
            estimate_node_subset(&steps, 0, |s| f64::from(s.degree), |_| true).unwrap();
        assert_eq!(all, subset);
    }

    #[test]
    fn burn_in_equals_dropping_the_prefix() {
        let steps = triangle_walk(WalkKind::NonBacktracking, 300);
        let with_burn = estimate_node(&steps, 50, |s| f64::from(s.degree)).unwrap();
        let dropped = estimate_node(&steps[50..], 0, |s| f64::from(s.degree)).unwrap();
        assert_eq!(with_burn, dropped);
    }

    #[test]
    fn long_walks_converge_to_stationary_limits() {
        // |V| = 3 with degrees 1, 2, 2 and |E| = 2 with sizes 3, 2, so the
        // mean degree is 5/3 and the mean size 5/2. The 1/d and 1/s weights
        // invert the uniform pair-chain stationary of the higher-order
        // walks, so ho-rw and nb-ho-rw recover the true means. The
        // size-weighted walks have different stationaries — pair weight
        // b(s-1) for p-rw and b(s-1)^2 for c-rw — so the same estimator
        // converges to computable biased limits instead: by hand,
        //   p-rw: Psi_v -> 5/8,  mean degree 8/5;  Psi_e -> 3/8,  mean size 8/3
        //   c-rw: Psi_v -> 9/14, mean degree 14/9; Psi_e -> 5/14, mean size 14/5
        let cases = [
            (WalkKind::HigherOrder, 5.0 / 3.0, 5.0 / 2.0),
            (WalkKind::NonBacktracking, 5.0 / 3.0, 5.0 / 2.0),
            (WalkKind::Projected, 8.0 / 5.0, 8.0 / 3.0),
            (WalkKind::Carletti, 14.0 / 9.0, 14.0 / 5.0),
        ];
        for (walk, mean_degree, mean_size) in cases {
            let steps = triangle_walk(walk, 200_000);
            let deg = estimate_node(&steps, 1000, |s| f64::from(s.degree)).unwrap();
            assert!(
                (deg.value - mean_degree).abs() < 0.02,
                "{walk}: mean degree {} != {mean_degree}",
                deg.value
            );
            let size = estimate_hyperedge(&steps, 1000, |s| f64::from(s.size)).unwrap();
            assert!(
                (size.value - mean_size).abs() < 0.02,
                "{walk}: mean size {} != {mean_size}",
                size.value
            );
        }
    }

    #[test]
    fn pmf_sums_to_one_and_matches_indicator_estimates() {
        let steps = triangle_walk(WalkKind::HigherOrder, 50_000);
        let pmf = estimate_distribution(&steps, 100, Distribution::Degree, DistributionForm::Pmf)
            .unwrap();
        let total: f64 = pmf.values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        for (&d, &p) in &pmf {
            let ind = estimate_node(&steps, 100, |s| f64::from(u8::from(s.degree == d))).unwrap();
            assert!((p - ind.value).abs() < 1e-12);
        }
        // Degrees in the triangle are 1, 2, 2.
        assert!((pmf[&1] - 1.0 / 3.0).abs() < 0.02);
        assert!((pmf[&2] - 2.0 / 3.0).abs() < 0.02);
    }

    #[test]
    fn ccdf_is_one_at_min_and_non_increasing() {
        let steps = triangle_walk(WalkKind::Projected, 20_000);
        let ccdf =
            estimate_distribution(&steps, 0, Distribution::Size, DistributionForm::Ccdf).unwrap();
        let values: Vec<f64> = ccdf.values().copied().collect();
        assert!((values[0] - 1.0).abs() < 1e-12);
        for pair in values.windows(2) {
            assert!(pair[0] >= pair[1]);
        }
    }

    #[test]
    fn composition_partitions_to_one() {
        let steps = triangle_walk(WalkKind::NonBacktracking, 10_000);
        let comp = estimate_composition(
            &steps,
            0,
            Target::Node,
            |s| Some(if s.degree == 1 { "leaf" } else { "core" }.to_string()),
            |s| s.node.to_string(),
        )
        .unwrap();
        let total: f64 = comp.values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((comp["leaf"] - 1.0 / 3.0).abs() < 0.05);
    }

    #[test]
    fn composition_missing_category_is_reported() {
        let steps = triangle_walk(WalkKind::HigherOrder, 10);
        let err = estimate_composition(
            &steps,
            0,
            Target::Node,
            |_| None,
            |s| format!("node {}", s.node),
        )
        .unwrap_err();
        assert!(matches!(err, EstimateError::MissingCategory(_)));
    }

    #[test]
    fn csv_rendering() {
        let mut dist = BTreeMap::new();
        dist.insert(2, 0.5);
        dist.insert(3, 0.5);
        assert_eq!(
            distribution_csv(&dist),
            "value,probability\n2,0.5\n3,0.5\n"
        );
    }
}
