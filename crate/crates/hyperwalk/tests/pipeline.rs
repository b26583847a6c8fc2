//! End-to-end flows that cross module boundaries: remote oracle against the
//! mock server, sequence files on disk, and chain verification on generated
//! hypergraphs.

use std::fs::File;
use std::io::{BufReader, BufWriter};

use hyperwalk::estimate::{estimate_distribution, estimate_node, Distribution, DistributionForm};
use hyperwalk::eval::{generate_random_hypergraph, GeneratorParams, SizeLaw};
use hyperwalk::markov::verify_uniform_stationarity;
use hyperwalk::remote::{MockServer, RemoteConfig, RemoteOracle};
use hyperwalk::sequence::{read_sequence, write_sequence};
use hyperwalk::walk::run_walk;
use hyperwalk::{
    BudgetedOracle, Hypergraph, InMemoryOracle, QueryBudget, WalkConfig, WalkKind,
};

fn midsize_graph() -> Hypergraph {
    generate_random_hypergraph(&GeneratorParams {
        nodes: 120,
        hyperedges: 70,
        size_law: SizeLaw::Uniform { min: 2, max: 4 },
        degree_skew: 0.6,
        seed: 11,
    })
    .unwrap()
}

fn config(walk: WalkKind, length: u64, seed_node: &str) -> WalkConfig {
    WalkConfig {
        walk,
        length,
        seed_node: seed_node.to_string(),
        rng_seed: 42,
        stream: 0,
        burn_in: 0,
    }
}

/// Label stream of a sequence, resolved through the oracle that ran it.
fn labels(
    steps: &[hyperwalk::Step],
    oracle: &dyn hyperwalk::Oracle,
) -> Vec<(String, String)> {
    steps
        .iter()
        .map(|s| (oracle.node_label(s.node), oracle.hyperedge_label(s.hyperedge)))
        .collect()
}

#[test]
fn remote_walk_survives_a_file_round_trip() {
    let h = midsize_graph();
    let seed_node = h.node_label(0).unwrap().to_string();
    let cfg = config(WalkKind::NonBacktracking, 2000, &seed_node);

    let mut local = InMemoryOracle::new(&h);
    let local_seq = run_walk(&mut local, &cfg).unwrap();

    let server = MockServer::spawn(h.clone()).unwrap();
    let mut remote = RemoteOracle::connect(RemoteConfig::new(server.endpoint())).unwrap();
    let remote_seq = run_walk(&mut remote, &cfg).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("walk.seq");
    write_sequence(&remote_seq, &remote, BufWriter::new(File::create(&path).unwrap())).unwrap();
    let loaded = read_sequence(BufReader::new(File::open(&path).unwrap())).unwrap();

    // The file preserves the run exactly: configuration, query accounting,
    // and the label stream all match what the local oracle produced.
    assert_eq!(loaded.seq.config, cfg);
    assert_eq!(loaded.seq.stats, local_seq.stats);
    assert!(!loaded.seq.truncated);
    let from_file: Vec<(String, String)> = loaded
        .seq
        .steps
        .iter()
        .map(|s| {
            (
                loaded.node_label(s.node).unwrap().to_string(),
                loaded.edge_label(s.hyperedge).unwrap().to_string(),
            )
        })
        .collect();
    assert_eq!(from_file, labels(&local_seq.steps, &local));

    // Estimates only read degrees and sizes, so file-based and direct
    // estimates agree bit for bit.
    let direct = estimate_node(&local_seq.steps, 100, |s| f64::from(s.degree)).unwrap();
    let replayed = estimate_node(&loaded.seq.steps, 100, |s| f64::from(s.degree)).unwrap();
    assert_eq!(direct.value, replayed.value);
    let direct_pmf =
        estimate_distribution(&local_seq.steps, 100, Distribution::Size, DistributionForm::Pmf)
            .unwrap();
    let replayed_pmf =
        estimate_distribution(&loaded.seq.steps, 100, Distribution::Size, DistributionForm::Pmf)
            .unwrap();
    assert_eq!(direct_pmf, replayed_pmf);

    server.shutdown();
}

#[test]
fn budgets_truncate_remote_and_local_walks_identically() {
    let h = midsize_graph();
    let seed_node = h.node_label(3).unwrap().to_string();
    let cfg = config(WalkKind::Projected, 1000, &seed_node);
    let budget = QueryBudget {
        max_node_queries: None,
        max_hyperedge_queries: Some(700),
    };

    let mut local = BudgetedOracle::new(InMemoryOracle::new(&h), budget);
    let local_seq = run_walk(&mut local, &cfg).unwrap();

    let server = MockServer::spawn(h.clone()).unwrap();
    let remote = RemoteOracle::connect(RemoteConfig::new(server.endpoint())).unwrap();
    let mut remote_budgeted = BudgetedOracle::new(remote, budget);
    let remote_seq = run_walk(&mut remote_budgeted, &cfg).unwrap();

    assert!(local_seq.truncated);
    assert_eq!(remote_seq.truncated, local_seq.truncated);
    assert_eq!(remote_seq.steps.len(), local_seq.steps.len());
    assert_eq!(remote_seq.stats, local_seq.stats);
    assert_eq!(
        labels(&remote_seq.steps, &remote_budgeted),
        labels(&local_seq.steps, &local)
    );

    server.shutdown();
}

#[test]
fn chain_verification_passes_on_generated_graphs() {
    for seed in 0..10u64 {
        let h = generate_random_hypergraph(&GeneratorParams {
            nodes: 8 + seed as usize,
            hyperedges: 4 + (seed as usize % 7),
            size_law: SizeLaw::Uniform {
                min: 2,
                max: 3 + (seed as u32 % 2),
            },
            degree_skew: 0.3 * seed as f64 % 1.2,
            seed: 1000 + seed,
        })
        .unwrap();
        let report = verify_uniform_stationarity(&h, 1e-12).unwrap();
        assert!(report.connected, "seed {seed}");
        assert!(report.irreducible, "seed {seed}");
        assert!(
            report.pass,
            "seed {seed}: column dev {:?}, residual {:?}",
            report.column_sum_max_dev, report.stationarity_residual
        );
    }
}
