//! Command-line frontend: dataset conversion, walk sampling against local
//! or remote oracles, estimation from sequence files, NRMSE experiments,
//! chain verification, and dataset statistics.
//!
//! Exit codes: 0 success, 2 sample truncated by a query budget, 3
//! degenerate estimate (zero denominator), 64 usage error, 65 data error.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperwalk::estimate::{
    estimate_hyperedge, estimate_hyperedge_subset, estimate_node, estimate_node_subset,
    distribution_csv, estimate_composition, Distribution, Estimate, EstimateError, Target,
};
use hyperwalk::eval::{
    compare_queries_and_repetition, estimate_property, nrmse_csv, per_value_csv, per_value_nrmse,
    queries_csv, run_nrmse_experiment, EvalError, ExperimentSpec, Property, PropertyValue,
};
use hyperwalk::hypergraph::Hypergraph;
use hyperwalk::io::{load_edge_list, load_size_member_pair, write_size_member_pair, LoadError};
use hyperwalk::markov::{verify_uniform_stationarity, MarkovError};
use hyperwalk::oracle::{
    BudgetedOracle, InMemoryOracle, Oracle, OracleError, QueryBudget,
};
use hyperwalk::remote::{MockServer, RemoteConfig, RemoteOracle, ServerOptions};
use hyperwalk::sequence::{read_sequence, write_sequence, LoadedSequence, SequenceIoError};
use hyperwalk::walk::{run_walk, WalkConfig, WalkError, WalkKind};

const EXIT_TRUNCATED: i32 = 2;
const EXIT_DEGENERATE: i32 = 3;
const EXIT_USAGE: i32 = 64;
const EXIT_DATA: i32 = 65;

#[derive(Parser)]
#[command(
    name = "hyperwalk",
    version,
    about = "Random-walk sampling and estimation for large hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a dataset in a canonical format
    Convert(ConvertArgs),
    /// Run one random walk and write the sampled sequence
    Sample(SampleArgs),
    /// Estimate a property from a sampled sequence file
    Estimate(EstimateArgs),
    /// Compare walks against ground truth over repeated runs
    Nrmse(NrmseArgs),
    /// Check the walk's chain structure on a full snapshot
    Verify(VerifyArgs),
    /// Print summary statistics of a dataset
    Stats(StatsArgs),
    /// Serve a dataset over the remote query protocol
    Serve(ServeArgs),
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Degenerate(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Degenerate(_) => EXIT_DEGENERATE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Degenerate(m) => m,
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<WalkError> for CliError {
    fn from(e: WalkError) -> Self {
        match e {
            WalkError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<SequenceIoError> for CliError {
    fn from(e: SequenceIoError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<EstimateError> for CliError {
    fn from(e: EstimateError) -> Self {
        match e {
            EstimateError::ZeroDenominator => CliError::Degenerate(e.to_string()),
            EstimateError::EmptySample => CliError::Usage(e.to_string()),
            EstimateError::MissingCategory(_) => CliError::Data(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Estimate(inner) => inner.into(),
            EvalError::Walk(inner) => inner.into(),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<MarkovError> for CliError {
    fn from(e: MarkovError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Convert(args) => cmd_convert(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Nrmse(args) => cmd_nrmse(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Serve(args) => cmd_serve(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

/// Dataset source shared by subcommands that read a full snapshot.
#[derive(Args)]
struct InputArgs {
    /// Hyperedge list file: one hyperedge per line, whitespace-separated node labels
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Hyperedge sizes file (one per line), paired with --members
    #[arg(long, value_name = "FILE", requires = "members", conflicts_with = "input")]
    sizes: Option<PathBuf>,
    /// Member labels file (one per line, concatenated per hyperedge), paired with --sizes
    #[arg(long, value_name = "FILE", requires = "sizes", conflicts_with = "input")]
    members: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self) -> Result<Hypergraph, CliError> {
        match (&self.input, &self.sizes, &self.members) {
            (Some(path), None, None) => Ok(load_edge_list(path)?),
            (None, Some(sizes), Some(members)) => Ok(load_size_member_pair(sizes, members)?),
            _ => Err(CliError::Usage(
                "provide --input FILE or --sizes FILE --members FILE".into(),
            )),
        }
    }

    fn load_component(&self, take_lcc: bool) -> Result<Hypergraph, CliError> {
        let h = self.load()?;
        if take_lcc && !h.is_connected() {
            let lcc = h.largest_connected_component();
            eprintln!(
                "note: dataset is disconnected; using its largest component \
                 ({} of {} nodes); pass --no-lcc to keep it whole",
                lcc.node_count(),
                h.node_count()
            );
            return Ok(lcc);
        }
        Ok(h)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DatasetFormat {
    /// One hyperedge per line
    EdgeList,
    /// Separate sizes and members files
    SizeMember,
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

// ---------------------------------------------------------------- convert

#[derive(Args)]
struct ConvertArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output format
    #[arg(long, value_enum, default_value = "edge-list")]
    to: DatasetFormat,
    /// Output file for edge-list form; stdout when omitted
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Outputs for size-member form
    #[arg(long, value_name = "FILE", requires = "members_out")]
    sizes_out: Option<PathBuf>,
    #[arg(long, value_name = "FILE", requires = "sizes_out")]
    members_out: Option<PathBuf>,
    /// Reduce to the largest connected component before writing
    #[arg(long)]
    lcc: bool,
}

fn cmd_convert(args: ConvertArgs) -> Result<i32, CliError> {
    let h = args.input.load()?;
    let h = if args.lcc && !h.is_connected() {
        h.largest_connected_component()
    } else {
        h
    };
    match args.to {
        DatasetFormat::EdgeList => emit(&h.export(), args.output.as_deref())?,
        DatasetFormat::SizeMember => {
            let (sizes, members) = match (&args.sizes_out, &args.members_out) {
                (Some(s), Some(m)) => (s, m),
                _ => {
                    return Err(CliError::Usage(
                        "--to size-member needs --sizes-out FILE and --members-out FILE".into(),
                    ))
                }
            };
            write_size_member_pair(&h, sizes, members)?;
        }
    }
    Ok(0)
}

// ----------------------------------------------------------------- sample

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Remote oracle endpoint (host:port) instead of a local dataset
    #[arg(long, conflicts_with_all = ["input", "sizes", "members"])]
    endpoint: Option<String>,
    /// Walk kind: p-rw, c-rw, ho-rw, or nb-ho-rw
    #[arg(long, value_parser = WalkKind::from_str)]
    walk: WalkKind,
    /// Number of steps to sample
    #[arg(long)]
    length: u64,
    /// Label of the start node
    #[arg(long)]
    seed_node: String,
    /// RNG seed; drawn from system entropy and printed when omitted
    #[arg(long)]
    rng_seed: Option<u64>,
    /// RNG substream index under the seed
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Burn-in recorded in the sequence header for downstream estimation
    #[arg(long, default_value_t = 0)]
    burn_in: u64,
    /// Stop early once this many node queries were spent
    #[arg(long)]
    max_node_queries: Option<u64>,
    /// Stop early once this many hyperedge queries were spent
    #[arg(long)]
    max_hyperedge_queries: Option<u64>,
    /// Sequence output file; stdout when omitted (run stats then go to stderr)
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Keep a disconnected dataset whole instead of using its largest component
    #[arg(long)]
    no_lcc: bool,
}

fn cmd_sample(args: SampleArgs) -> Result<i32, CliError> {
    if args.length == 0 {
        return Err(CliError::Usage("--length must be at least 1".into()));
    }
    let rng_seed = args.rng_seed.unwrap_or_else(|| {
        let seed: u64 = rand::random();
        eprintln!("rng-seed {seed} (from system entropy; pass --rng-seed {seed} to reproduce)");
        seed
    });
    let config = WalkConfig {
        walk: args.walk,
        length: args.length,
        seed_node: args.seed_node.clone(),
        rng_seed,
        stream: args.stream,
        burn_in: args.burn_in,
    };
    let budget = QueryBudget {
        max_node_queries: args.max_node_queries,
        max_hyperedge_queries: args.max_hyperedge_queries,
    };

    let stored;
    let backend: Box<dyn Oracle> = if let Some(endpoint) = args.endpoint.clone() {
        Box::new(RemoteOracle::connect(RemoteConfig::resolve(Some(endpoint))?)?)
    } else {
        stored = args.input.load_component(!args.no_lcc)?;
        Box::new(InMemoryOracle::new(&stored))
    };
    let mut oracle = BudgetedOracle::new(backend, budget);
    let seq = run_walk(&mut oracle, &config)?;

    let report = serde_json::json!({
        "walk": config.walk.as_str(),
        "length": config.length,
        "seed_node": config.seed_node,
        "rng_seed": config.rng_seed,
        "stream": config.stream,
        "burn_in": config.burn_in,
        "steps": seq.steps.len(),
        "truncated": seq.truncated,
        "node_queries": seq.stats.node_queries,
        "hyperedge_queries": seq.stats.hyperedge_queries,
    });
    match &args.output {
        Some(path) => {
            let mut w = BufWriter::new(fs::File::create(path)?);
            write_sequence(&seq, &oracle, &mut w)?;
            w.flush()?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write_sequence(&seq, &oracle, &mut w)?;
            w.flush()?;
            eprintln!("{report}");
        }
    }
    Ok(if seq.truncated { EXIT_TRUNCATED } else { 0 })
}

// --------------------------------------------------------------- estimate

#[derive(Clone, Copy)]
enum PropertyChoice {
    Eval(Property),
    Composition,
}

fn parse_property(s: &str) -> Result<PropertyChoice, String> {
    if s == "composition" {
        return Ok(PropertyChoice::Composition);
    }
    s.parse::<Property>().map(PropertyChoice::Eval)
}

fn parse_target(s: &str) -> Result<Target, String> {
    match s {
        "node" => Ok(Target::Node),
        "hyperedge" => Ok(Target::Hyperedge),
        other => Err(format!("unknown target {other:?} (use node or hyperedge)")),
    }
}

#[derive(Args)]
struct EstimateArgs {
    /// Sequence file produced by `sample`
    #[arg(long, value_name = "FILE")]
    sequence: PathBuf,
    /// avg-degree, avg-size, degree-pmf, size-pmf, degree-ccdf, size-ccdf, or composition
    #[arg(long, value_parser = parse_property)]
    property: PropertyChoice,
    /// Steps to discard before estimating; defaults to the sequence header's burn-in
    #[arg(long)]
    burn_in: Option<u64>,
    /// Named preset; `openalex` sets burn-in 5000 unless --burn-in is given
    #[arg(long)]
    preset: Option<String>,
    /// Labels (one per line) restricting avg-degree/avg-size to a subset
    #[arg(long, value_name = "FILE")]
    subset_file: Option<PathBuf>,
    /// `label category` lines classifying nodes or hyperedges (composition)
    #[arg(long, value_name = "FILE")]
    attributes_file: Option<PathBuf>,
    /// Population a composition is over
    #[arg(long, default_value = "node", value_parser = parse_target)]
    target: Target,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Report output file; stdout when omitted
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
}

/// Whitespace-free labels, one per line, `#` comments allowed.
fn read_label_lines(path: &Path) -> Result<Vec<String>, CliError> {
    let mut labels = Vec::new();
    for raw in fs::read_to_string(path)?.lines() {
        let line = raw.split('#').next().unwrap().trim();
        if !line.is_empty() {
            labels.push(line.to_string());
        }
    }
    Ok(labels)
}

/// `label category` per line, `#` comments allowed.
fn read_attributes(path: &Path) -> Result<HashMap<String, String>, CliError> {
    let mut map = HashMap::new();
    for (lineno, raw) in fs::read_to_string(path)?.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(label), Some(category), None) => {
                map.insert(label.to_string(), category.to_string());
            }
            _ => {
                return Err(CliError::Data(format!(
                    "attributes file line {}: expected `label category`",
                    lineno + 1
                )))
            }
        }
    }
    Ok(map)
}

fn scalar_report(
    loaded: &LoadedSequence,
    property: &str,
    est: &Estimate,
    burn_in: u64,
    subset_size: Option<usize>,
) -> serde_json::Value {
    let config = &loaded.seq.config;
    serde_json::json!({
        "property": property,
        "estimate": est.value,
        "phi": est.phi,
        "psi": est.psi,
        "samples_used": est.used,
        "burn_in": burn_in,
        "subset_size": subset_size,
        "walk": config.walk.as_str(),
        "length": config.length,
        "seed_node": config.seed_node,
        "rng_seed": config.rng_seed,
        "stream": config.stream,
        "truncated": loaded.seq.truncated,
    })
}

fn cmd_estimate(args: EstimateArgs) -> Result<i32, CliError> {
    if let Some(preset) = args.preset.as_deref() {
        if preset != "openalex" {
            return Err(CliError::Usage(format!(
                "unknown preset {preset:?} (available: openalex)"
            )));
        }
    }
    let loaded = read_sequence(BufReader::new(fs::File::open(&args.sequence)?))?;
    let steps = &loaded.seq.steps;
    let burn_in = args.burn_in.unwrap_or(match args.preset.as_deref() {
        Some("openalex") => 5000,
        _ => loaded.seq.config.burn_in,
    });

    let subset = match &args.subset_file {
        Some(path) => Some(read_label_lines(path)?),
        None => None,
    };
    let text = match args.property {
        PropertyChoice::Eval(p @ (Property::MeanDegree | Property::MeanSize)) => {
            let (est, subset_size) = match (p, &subset) {
                (Property::MeanDegree, None) => {
                    (estimate_node(steps, burn_in, |s| f64::from(s.degree))?, None)
                }
                (Property::MeanDegree, Some(labels)) => {
                    let ids: HashSet<_> =
                        labels.iter().filter_map(|l| loaded.node_id(l)).collect();
                    let est = estimate_node_subset(
                        steps,
                        burn_in,
                        |s| f64::from(s.degree),
                        |s| ids.contains(&s.node),
                    )?;
                    (est, Some(labels.len()))
                }
                (Property::MeanSize, None) => {
                    (estimate_hyperedge(steps, burn_in, |s| f64::from(s.size))?, None)
                }
                (Property::MeanSize, Some(labels)) => {
                    let ids: HashSet<_> =
                        labels.iter().filter_map(|l| loaded.edge_id(l)).collect();
                    let est = estimate_hyperedge_subset(
                        steps,
                        burn_in,
                        |s| f64::from(s.size),
                        |s| ids.contains(&s.hyperedge),
                    )?;
                    (est, Some(labels.len()))
                }
                _ => unreachable!(),
            };
            match args.format {
                OutputFormat::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&scalar_report(
                        &loaded,
                        p.as_str(),
                        &est,
                        burn_in,
                        subset_size,
                    ))?
                ),
                OutputFormat::Csv => format!("property,estimate\n{},{}\n", p, est.value),
            }
        }
        PropertyChoice::Eval(p) => {
            if subset.is_some() {
                return Err(CliError::Usage(
                    "--subset-file applies only to avg-degree and avg-size".into(),
                ));
            }
            let PropertyValue::Distribution(dist) = estimate_property(steps, burn_in, p)? else {
                unreachable!("distribution properties return distributions")
            };
            match args.format {
                OutputFormat::Json => {
                    let map: serde_json::Map<String, serde_json::Value> = dist
                        .iter()
                        .map(|(v, p)| (v.to_string(), serde_json::json!(p)))
                        .collect();
                    let config = &loaded.seq.config;
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&serde_json::json!({
                            "property": p.as_str(),
                            "burn_in": burn_in,
                            "walk": config.walk.as_str(),
                            "length": config.length,
                            "seed_node": config.seed_node,
                            "rng_seed": config.rng_seed,
                            "distribution": map,
                        }))?
                    )
                }
                OutputFormat::Csv => distribution_csv(&dist),
            }
        }
        PropertyChoice::Composition => {
            if subset.is_some() {
                return Err(CliError::Usage(
                    "--subset-file applies only to avg-degree and avg-size".into(),
                ));
            }
            let Some(path) = &args.attributes_file else {
                return Err(CliError::Usage(
                    "composition needs --attributes-file FILE".into(),
                ));
            };
            let attributes = read_attributes(path)?;
            let label_of = |step: &hyperwalk::walk::Step| -> String {
                match args.target {
                    Target::Node => loaded
                        .node_label(step.node)
                        .unwrap_or_default()
                        .to_string(),
                    Target::Hyperedge => loaded
                        .edge_label(step.hyperedge)
                        .unwrap_or_default()
                        .to_string(),
                }
            };
            let comp = estimate_composition(
                steps,
                burn_in,
                args.target,
                |s| attributes.get(&label_of(s)).cloned(),
                label_of,
            )?;
            match args.format {
                OutputFormat::Json => {
                    let config = &loaded.seq.config;
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&serde_json::json!({
                            "property": "composition",
                            "target": match args.target {
                                Target::Node => "node",
                                Target::Hyperedge => "hyperedge",
                            },
                            "burn_in": burn_in,
                            "walk": config.walk.as_str(),
                            "length": config.length,
                            "seed_node": config.seed_node,
                            "rng_seed": config.rng_seed,
                            "proportions": comp,
                        }))?
                    )
                }
                OutputFormat::Csv => {
                    let mut out = String::from("category,proportion\n");
                    for (category, share) in &comp {
                        out.push_str(&format!("{category},{share}\n"));
                    }
                    out
                }
            }
        }
    };
    emit(&text, args.output.as_deref())?;
    Ok(0)
}

// ------------------------------------------------------------------ nrmse

fn parse_distribution(s: &str) -> Result<Distribution, String> {
    match s {
        "degree" => Ok(Distribution::Degree),
        "size" => Ok(Distribution::Size),
        other => Err(format!("unknown distribution {other:?} (use degree or size)")),
    }
}

#[derive(Args)]
struct NrmseArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Experiment config file (`key = value` lines: walks, r, runs, properties, ...)
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// NRMSE table output; stdout when omitted
    #[arg(long, value_name = "FILE")]
    nrmse_out: Option<PathBuf>,
    /// Also write mean query counts and repetition rates per walk and length
    #[arg(long, value_name = "FILE")]
    queries_out: Option<PathBuf>,
    /// Also write per-value NRMSE for this distribution (degree or size)
    #[arg(long, value_parser = parse_distribution, requires = "per_value_out")]
    per_value: Option<Distribution>,
    #[arg(long, value_name = "FILE", requires = "per_value")]
    per_value_out: Option<PathBuf>,
    /// Keep a disconnected dataset whole instead of using its largest component
    #[arg(long)]
    no_lcc: bool,
}

fn cmd_nrmse(args: NrmseArgs) -> Result<i32, CliError> {
    let h = args.input.load_component(!args.no_lcc)?;
    let spec = ExperimentSpec::parse(&fs::read_to_string(&args.config)?)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let results = run_nrmse_experiment(&h, &spec)?;
    emit(&nrmse_csv(&results.cells), args.nrmse_out.as_deref())?;
    if let Some(path) = &args.queries_out {
        let rows = compare_queries_and_repetition(&h, &spec)?;
        fs::write(path, queries_csv(&rows))?;
    }
    if let Some(which) = args.per_value {
        let path = args.per_value_out.as_ref().expect("clap enforces the pair");
        let rows = per_value_nrmse(&h, &spec, which)?;
        fs::write(path, per_value_csv(&rows))?;
    }
    Ok(0)
}

// ----------------------------------------------------------------- verify

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Numerical tolerance for column sums and the stationarity residual
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, CliError> {
    let h = args.input.load()?;
    let report = verify_uniform_stationarity(&h, args.tolerance)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.pass { 0 } else { EXIT_DATA })
}

// ------------------------------------------------------------------ stats

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Keep a disconnected dataset whole instead of using its largest component
    #[arg(long)]
    no_lcc: bool,
}

fn cmd_stats(args: StatsArgs) -> Result<i32, CliError> {
    let h = args.input.load_component(!args.no_lcc)?;
    let n = h.node_count();
    let m = h.hyperedge_count();
    let degrees: Vec<u32> = (0..n as u32).map(|i| h.degree(i).unwrap()).collect();
    let sizes: Vec<u32> = (0..m as u32).map(|a| h.size(a).unwrap()).collect();
    let mean = |values: &[u32]| {
        values.iter().map(|&v| f64::from(v)).sum::<f64>() / values.len() as f64
    };
    let report = serde_json::json!({
        "nodes": n,
        "hyperedges": m,
        "mean_degree": mean(&degrees),
        "max_degree": degrees.iter().max().copied().unwrap_or(0),
        "degree_one_fraction": degrees.iter().filter(|&&d| d == 1).count() as f64 / n as f64,
        "mean_size": mean(&sizes),
        "max_size": sizes.iter().max().copied().unwrap_or(0),
        "connected": h.is_connected(),
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(0)
}

// ------------------------------------------------------------------ serve

#[derive(Args)]
struct ServeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Address to listen on; port 0 picks a free port
    #[arg(long, default_value = "127.0.0.1:0")]
    bind: String,
    /// Serve only the largest connected component
    #[arg(long)]
    lcc: bool,
}

fn cmd_serve(args: ServeArgs) -> Result<i32, CliError> {
    let h = args.input.load()?;
    let h = if args.lcc && !h.is_connected() {
        h.largest_connected_component()
    } else {
        h
    };
    let (n, m) = (h.node_count(), h.hyperedge_count());
    let server = MockServer::spawn_at(&args.bind, h, ServerOptions::default())?;
    println!("serving {n} nodes and {m} hyperedges at {}", server.addr());
    loop {
        std::thread::park();
    }
}
