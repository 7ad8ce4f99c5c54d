use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ksetsplus::experiments::{
    accuracy_sweep, edge_accuracy, haversine_matrix, latency_distance, sbm_generate, scaling_table,
    similarity_from_signed, write_sweep_tsv, AccuracyReference, SbmParams, SweepConfig,
};
use ksetsplus::io::{parse_dense_csv, parse_partition, read_edge_list, read_geo_csv, write_partition_tsv};
use ksetsplus::transforms::{induced_cohesion, lift_similarity, sigma_min};
use ksetsplus::verify::pairwise_isolation_check;
use ksetsplus::{run, Cohesion, DataSet, Error, Measure, MeasureKind, RunConfig, RunResult};
use serde_json::json;

/// K-sets+ clustering of sparse similarity matrices and semi-metrics.
///
/// Exit codes: 0 ok, 1 verification failure, 2 input error, 3 invalid parameter.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partition a similarity or distance matrix into K sets.
    Cluster(ClusterArgs),
    /// Generate one signed two-block graph, cluster it and report edge accuracy.
    Sbm(SbmArgs),
    /// Edge-accuracy table over average degree and crossover probability.
    Sweep(SweepArgs),
    /// Check that every two sets of a partition are clusters in isolation.
    Verify(VerifyArgs),
    /// Cluster points by great-circle distance or by a latency matrix.
    Geo(GeoArgs),
    /// Time full runs on random sparse similarities of growing size.
    Bench(BenchArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    /// `i j value` triples, 0-based indices.
    Edges,
    /// Square CSV matrix.
    Dense,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Kind {
    Similarity,
    Distance,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Reference {
    /// Sign before the crossover flip.
    Pre,
    /// Observed sign.
    Post,
}

impl From<Reference> for AccuracyReference {
    fn from(r: Reference) -> Self {
        match r {
            Reference::Pre => AccuracyReference::PreFlip,
            Reference::Post => AccuracyReference::PostFlip,
        }
    }
}

#[derive(Args, Debug)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "edges")]
    format: Format,
    /// Dense input starts with a row of point labels.
    #[arg(long)]
    header: bool,
    #[arg(long, value_enum, default_value = "similarity")]
    kind: Kind,
    /// Average `(i,j)` and `(j,i)` of an asymmetric dense matrix.
    #[arg(long)]
    symmetrize: bool,
}

#[derive(Args, Debug)]
struct EngineArgs {
    /// Number of sets.
    #[arg(short)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long, default_value_t = 100)]
    max_passes: usize,
}

impl EngineArgs {
    fn config(&self) -> RunConfig {
        RunConfig::new(self.k)
            .with_seed(self.seed)
            .with_restarts(self.restarts)
            .with_max_passes(self.max_passes)
    }
}

#[derive(Args, Debug)]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Run on the lifted semi-cohesion measure of a similarity input.
    #[arg(long)]
    lift: bool,
    /// Lifting shift; defaults to the smallest valid value.
    #[arg(long, requires = "lift")]
    sigma: Option<f64>,
    /// Partition TSV; the JSON summary goes next to it with a `.json`
    /// extension. Without it the partition goes to stdout and the summary to stderr.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// `label cluster` lines.
    #[arg(long)]
    partition: PathBuf,
}

#[derive(Args, Debug)]
struct SbmArgs {
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Average degree.
    #[arg(long, default_value_t = 10.0)]
    c: f64,
    /// `c_in − c_out`.
    #[arg(long, default_value_t = 5.0)]
    diff: f64,
    /// Crossover probability.
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    #[arg(long, value_enum, default_value = "pre")]
    reference: Reference,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = 2000)]
    n: usize,
    /// Average degrees, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "5,10,15,20")]
    c: Vec<f64>,
    /// Crossover probabilities, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0,0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5")]
    p: Vec<f64>,
    #[arg(long, default_value_t = 5.0)]
    diff: f64,
    #[arg(long, default_value_t = 20)]
    graphs: usize,
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "pre")]
    reference: Reference,
    /// TSV output; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GeoArgs {
    /// CSV with header `label,lat,lon`.
    #[arg(long, required_unless_present = "latency", conflicts_with = "latency")]
    points: Option<PathBuf>,
    /// Square CSV latency matrix with a label header; symmetrized by averaging.
    #[arg(long)]
    latency: Option<PathBuf>,
    #[arg(short, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 100)]
    max_passes: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Point counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10000,20000,40000")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 10.0)]
    avg_degree: f64,
    #[arg(short, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug)]
enum Failure {
    Verification(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CheckFailed(_) => 1,
        Error::KOutOfRange { .. }
        | Error::InvalidConfig(_)
        | Error::InvalidProbability(_)
        | Error::SigmaTooSmall { .. }
        | Error::TooFewPoints => 3,
        _ => 2,
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    let f = File::open(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    Ok(BufReader::new(f))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    let f = File::create(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    Ok(BufWriter::new(f))
}

fn measure_kind(kind: Kind) -> MeasureKind {
    match kind {
        Kind::Similarity => MeasureKind::Similarity,
        Kind::Distance => MeasureKind::Distance,
    }
}

fn load(args: &InputArgs) -> Result<(DataSet, Measure), Failure> {
    let kind = measure_kind(args.kind);
    match args.format {
        Format::Edges => {
            let g = read_edge_list(open(&args.input)?, kind)?;
            Ok((DataSet::new(g.n())?, g))
        }
        Format::Dense => {
            let (labels, rows) = parse_dense_csv(open(&args.input)?, args.header)?;
            let g = if args.symmetrize {
                Measure::symmetrize(kind, &rows)?
            } else {
                Measure::from_dense(kind, &rows)?
            };
            let data = match labels {
                Some(l) => DataSet::with_labels(l)?,
                None => DataSet::new(g.n())?,
            };
            Ok((data, g))
        }
    }
}

/// Semi-cohesion view used for verification: the induced measure of a
/// distance, or the lifted measure of a similarity at the smallest shift.
fn cohesion_of(kind: Kind, g: &Measure) -> Result<Cohesion, Error> {
    match kind {
        Kind::Distance => induced_cohesion(g),
        Kind::Similarity => lift_similarity(g, sigma_min(g)?),
    }
}

fn summary(out: &RunResult<f64>, restarts: usize, sigma: Option<f64>) -> serde_json::Value {
    let mut v = json!({
        "schema": 1,
        "objective": out.objective,
        "passes": out.passes,
        "restarts": restarts,
        "best_restart": out.restart,
        "converged": out.converged,
        "k": out.partition.k(),
    });
    if let Some(s) = sigma {
        v["sigma_used"] = json!(s);
    }
    v
}

fn emit(output: Option<&Path>, data: &DataSet, out: &RunResult<f64>, meta: serde_json::Value) -> Result<(), Failure> {
    let meta = serde_json::to_string_pretty(&meta).expect("json value serializes");
    match output {
        Some(path) => {
            let mut w = create(path)?;
            write_partition_tsv(&mut w, data, &out.partition)?;
            w.flush()?;
            let mut s = create(&path.with_extension("json"))?;
            writeln!(s, "{meta}")?;
            s.flush()?;
        }
        None => {
            write_partition_tsv(io::stdout().lock(), data, &out.partition)?;
            eprintln!("{meta}");
        }
    }
    Ok(())
}

fn cmd_cluster(args: &ClusterArgs) -> Result<(), Failure> {
    let (data, g) = load(&args.input)?;
    let cfg = args.engine.config();
    cfg.validate(g.n())?;
    let (out, sigma) = match (args.input.kind, args.lift) {
        (Kind::Distance, _) => (run(induced_cohesion(&g)?.measure(), &cfg)?, None),
        (Kind::Similarity, false) => (run(&g, &cfg)?, None),
        (Kind::Similarity, true) => {
            let sigma = match args.sigma {
                Some(s) => s,
                None => sigma_min(&g)?,
            };
            (run(lift_similarity(&g, sigma)?.measure(), &cfg)?, Some(sigma))
        }
    };
    emit(args.output.as_deref(), &data, &out, summary(&out, cfg.restarts, sigma))
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let (data, g) = load(&args.input)?;
    let partition = parse_partition(open(&args.partition)?, &data)?;
    let report = pairwise_isolation_check(&cohesion_of(args.input.kind, &g)?, &partition)?;
    let mut w = io::stdout().lock();
    for row in &report.slack {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.9}")).collect();
        writeln!(w, "{}", cells.join("\t"))?;
    }
    let min = if report.min_slack.is_finite() { report.min_slack } else { 0.0 };
    writeln!(w, "min_slack\t{min:.9}")?;
    if report.passes() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("min slack {min:.9} is below -1e-9")))
    }
}

fn cmd_sbm(args: &SbmArgs) -> Result<(), Failure> {
    let params = SbmParams { n: args.n, c: args.c, diff: args.diff, p: args.p, seed: args.seed };
    let graph = sbm_generate(&params)?;
    let g = similarity_from_signed(&graph);
    let cfg = RunConfig::new(2).with_seed(args.seed).with_restarts(args.restarts);
    let out = run(&g, &cfg)?;
    let accuracy = edge_accuracy(&graph, &out.partition, args.reference.into())?;
    let v = json!({
        "schema": 1,
        "nodes": graph.n,
        "edges": graph.edges.len(),
        "flipped_fraction": graph.flipped_fraction(),
        "accuracy": accuracy,
        "objective": out.objective,
        "passes": out.passes,
        "converged": out.converged,
    });
    println!("{}", serde_json::to_string_pretty(&v).expect("json value serializes"));
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let mut cfg = SweepConfig::new(args.n, args.c.clone(), args.p.clone());
    cfg.diff = args.diff;
    cfg.graphs_per_point = args.graphs;
    cfg.restarts = args.restarts;
    cfg.seed = args.seed;
    cfg.reference = args.reference.into();
    if cfg.graphs_per_point == 0 || cfg.restarts == 0 {
        return Err(Error::InvalidConfig("graphs and restarts must be positive".into()).into());
    }
    let rows = accuracy_sweep(&cfg)?;
    match &args.output {
        Some(path) => {
            let mut w = create(path)?;
            write_sweep_tsv(&mut w, &rows)?;
            w.flush()?;
        }
        None => write_sweep_tsv(io::stdout().lock(), &rows)?,
    }
    Ok(())
}

fn cmd_geo(args: &GeoArgs) -> Result<(), Failure> {
    let (data, d) = match (&args.points, &args.latency) {
        (Some(path), _) => {
            let pts = read_geo_csv(open(path)?)?;
            let d = haversine_matrix(&pts.iter().map(|p| p.1).collect::<Vec<_>>())?;
            (DataSet::with_labels(pts.into_iter().map(|p| p.0).collect())?, d)
        }
        (None, Some(path)) => {
            let (labels, rows) = parse_dense_csv(open(path)?, true)?;
            let d = latency_distance(&rows)?;
            (DataSet::with_labels(labels.expect("header requested"))?, d)
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let cfg = RunConfig::new(args.k)
        .with_seed(args.seed)
        .with_restarts(args.restarts)
        .with_max_passes(args.max_passes);
    cfg.validate(d.n())?;
    let g = induced_cohesion(&d)?;
    let out = run(g.measure(), &cfg)?;
    let mut meta = summary(&out, cfg.restarts, None);
    meta["min_pairwise_slack"] = json!(pairwise_isolation_check(&g, &out.partition)?.min_slack);
    emit(args.output.as_deref(), &data, &out, meta)
}

fn cmd_bench(args: &BenchArgs) -> Result<(), Failure> {
    if args.k < 2 || args.n.iter().any(|&n| n < args.k) {
        return Err(Error::InvalidConfig(format!("need 2 <= K <= n, got K = {}", args.k)).into());
    }
    let rows = scaling_table(&args.n, args.avg_degree, args.k, args.seed)?;
    let mut w = io::stdout().lock();
    writeln!(w, "n\tm\tpasses\twall_time_s\tns_per_pass_per_kn_plus_m")?;
    for r in rows {
        writeln!(w, "{}\t{}\t{}\t{:.6}\t{:.4}", r.n, r.m, r.passes, r.wall_time.as_secs_f64(), r.normalized_ns)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Cluster(a) => cmd_cluster(a),
        Command::Sbm(a) => cmd_sbm(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Geo(a) => cmd_geo(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
