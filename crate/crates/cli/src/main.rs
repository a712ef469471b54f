use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use sbm_phase::ingest::{
    preprocess, read_edge_list, read_labels, IdDialect, LabeledGraph, Preprocess, UnknownIds,
};
use sbm_phase::report::{sweep_csv, RunManifest};
use sbm_phase::rng::trial_seed;
use sbm_phase::{
    detectability, estimate_with, generate_cross_block, leading_eigenpair, leading_singular_value,
    linear_grid, partition, run_sweep, Community, EdgeCounting, EmpiricalEstimates64,
    ModularityOperator64, Partition, PartitionMethod, SbmBase, SolverConfig64, SweepConfig64,
    SweepRecord64,
};

const THREADS_ENV: &str = "SBM_PHASE_THREADS";

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    NonConvergence(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::NonConvergence(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::NonConvergence(m) => m,
        }
    }
}

impl From<sbm_phase::Error> for Failure {
    fn from(e: sbm_phase::Error) -> Self {
        match e {
            sbm_phase::Error::InvalidParameter(_) | sbm_phase::Error::TooLarge { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Data(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Spectral modularity detection and its phase transition on
/// two-community stochastic block models.
#[derive(Debug, Parser)]
#[command(name = "sbm-phase", version)]
struct Cli {
    /// Worker threads (default: $SBM_PHASE_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo sweep over the inter-community probability p.
    Sweep(SweepArgs),
    /// Partition a graph from an edge-list file.
    Detect(DetectArgs),
    /// Empirical block-model estimates for a partitioned graph.
    Estimate(EstimateArgs),
    /// Check σ₁(C)/√(n1·n2) → p on random cross blocks.
    ValidateConcentration(ConcentrationArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Preset {
    Fig1Desk,
    Fig2Desk,
    Fig1Paper,
    Fig2Paper,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Sign,
    Kmeans,
}

impl From<MethodArg> for PartitionMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Sign => PartitionMethod::Sign,
            MethodArg::Kmeans => PartitionMethod::Kmeans,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DialectArg {
    String,
    Integer,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EdgeCountArg {
    Once,
    Twice,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Relative eigensolver tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 20_000)]
    max_iter: usize,
}

impl SolverArgs {
    fn config(&self, seed: u64) -> SolverConfig64 {
        SolverConfig64 {
            tol: self.tol,
            max_iter: self.max_iter,
            seed,
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Start from a named parameter set; explicit flags override it.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    #[arg(long)]
    p_step: Option<f64>,
    /// Samples per grid point [default: 100].
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "sign")]
    method: MethodArg,
    #[command(flatten)]
    solver: SolverArgs,
    /// CSV destination (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON manifest destination.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Whitespace-separated edge list.
    #[arg(long)]
    edges: PathBuf,
    #[arg(long, value_enum, default_value = "string")]
    dialect: DialectArg,
    #[arg(long)]
    drop_isolated: bool,
    #[arg(long)]
    largest_component: bool,
    /// Skip label-file ids that do not occur in the edge list.
    #[arg(long)]
    ignore_unknown_labels: bool,
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// `id label` file with two distinct labels; enables detectability.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "sign")]
    method: MethodArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solver: SolverArgs,
    /// JSON report destination (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the partition as `id community` lines.
    #[arg(long)]
    partition_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["labels", "from_detection"])))]
struct EstimateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Use the spectral partition instead of a label file.
    #[arg(long)]
    from_detection: bool,
    #[arg(long, value_enum, default_value = "once")]
    edge_count: EdgeCountArg,
    #[arg(long, value_enum, default_value = "sign")]
    method: MethodArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConcentrationArgs {
    #[arg(long)]
    n1: usize,
    #[arg(long)]
    n2: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Detect(a) => cmd_detect(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::ValidateConcentration(a) => cmd_validate_concentration(a),
    }
}

fn configure_threads(flag: Option<usize>) -> CliResult<()> {
    let threads = match flag {
        Some(t) => Some(t),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) if !v.trim().is_empty() => Some(v.trim().parse().map_err(|_| {
                Failure::Usage(format!(
                    "{THREADS_ENV} must be a positive integer, got `{v}`"
                ))
            })?),
            _ => None,
        },
    };
    let Some(threads) = threads else {
        return Ok(());
    };
    if threads == 0 {
        return Err(Failure::Usage("thread count must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot configure thread pool: {e}")))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| Failure::Data(format!("cannot write to stdout: {e}")))
        }
    }
}

fn to_json<T: Serialize>(m: &T) -> CliResult<String> {
    serde_json::to_string_pretty(m)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Data(e.to_string()))
}

#[derive(Debug, Clone, Serialize)]
struct SweepParams {
    preset: Option<Preset>,
    n1: usize,
    n2: usize,
    p1: f64,
    p2: f64,
    p_min: f64,
    p_max: f64,
    p_step: f64,
    trials: usize,
    method: PartitionMethod,
    tol: f64,
    max_iter: usize,
    p_star: f64,
}

#[derive(Debug, Clone, Copy)]
struct PresetValues {
    n1: usize,
    n2: usize,
    p1: f64,
    p2: f64,
    p_min: f64,
    p_max: f64,
    p_step: f64,
    trials: usize,
}

fn preset_values(p: Preset) -> PresetValues {
    match p {
        Preset::Fig1Desk => PresetValues {
            n1: 500,
            n2: 500,
            p1: 0.25,
            p2: 0.25,
            p_min: 0.05,
            p_max: 0.45,
            p_step: 0.05,
            trials: 20,
        },
        Preset::Fig2Desk => PresetValues {
            n1: 500,
            n2: 1000,
            p1: 0.5,
            p2: 0.25,
            p_min: 0.05,
            p_max: 0.60,
            p_step: 0.05,
            trials: 20,
        },
        Preset::Fig1Paper => PresetValues {
            n1: 2000,
            n2: 2000,
            p1: 0.25,
            p2: 0.25,
            p_min: 0.05,
            p_max: 0.45,
            p_step: 0.025,
            trials: 100,
        },
        Preset::Fig2Paper => PresetValues {
            n1: 1000,
            n2: 2000,
            p1: 0.5,
            p2: 0.25,
            p_min: 0.05,
            p_max: 0.60,
            p_step: 0.025,
            trials: 100,
        },
    }
}

fn required<T>(value: Option<T>, preset: Option<T>, flag: &str) -> CliResult<T> {
    value
        .or(preset)
        .ok_or_else(|| Failure::Usage(format!("--{flag} is required without --preset")))
}

fn cmd_sweep(a: SweepArgs) -> CliResult<()> {
    let pv = a.preset.map(preset_values);
    let params = SweepParams {
        preset: a.preset,
        n1: required(a.n1, pv.map(|v| v.n1), "n1")?,
        n2: required(a.n2, pv.map(|v| v.n2), "n2")?,
        p1: required(a.p1, pv.map(|v| v.p1), "p1")?,
        p2: required(a.p2, pv.map(|v| v.p2), "p2")?,
        p_min: required(a.p_min, pv.map(|v| v.p_min), "p-min")?,
        p_max: required(a.p_max, pv.map(|v| v.p_max), "p-max")?,
        p_step: required(a.p_step, pv.map(|v| v.p_step), "p-step")?,
        trials: a.trials.or(pv.map(|v| v.trials)).unwrap_or(100),
        method: a.method.into(),
        tol: a.solver.tol,
        max_iter: a.solver.max_iter,
        p_star: 0.0,
    };
    let base = SbmBase {
        n1: params.n1,
        n2: params.n2,
        p1: params.p1,
        p2: params.p2,
    };
    let params = SweepParams {
        p_star: base.p_star(),
        ..params
    };
    let cfg = SweepConfig64 {
        base,
        p_grid: linear_grid(params.p_min, params.p_max, params.p_step)?,
        trials: params.trials,
        master_seed: a.seed,
        solver: a.solver.config(0),
        method: params.method,
    };
    let records = run_sweep(&cfg)?;

    emit(a.out.as_deref(), &sweep_csv(&records))?;
    if let Some(path) = a.manifest.as_deref() {
        emit(
            Some(path),
            &to_json(&RunManifest::new("sweep", a.seed, &params, &records))?,
        )?;
    }
    report_exclusions(&records)
}

fn report_exclusions(records: &[SweepRecord64]) -> CliResult<()> {
    let excluded: usize = records.iter().map(|r| r.excluded).sum();
    if excluded > 0 {
        eprintln!("warning: {excluded} trial(s) did not converge and were excluded");
    }
    match records.iter().find(|r| !r.valid) {
        Some(r) => Err(Failure::NonConvergence(format!(
            "no trial converged at p = {}",
            r.p
        ))),
        None => Ok(()),
    }
}

fn load_graph(g: &GraphArgs, labels: Option<&Path>) -> CliResult<LabeledGraph> {
    let dialect = match g.dialect {
        DialectArg::String => IdDialect::String,
        DialectArg::Integer => IdDialect::Integer,
    };
    let mut lg = read_edge_list(&g.edges, dialect)?;
    if let Some(path) = labels {
        let unknown = if g.ignore_unknown_labels {
            UnknownIds::Ignore
        } else {
            UnknownIds::Reject
        };
        lg.labels = Some(read_labels(path, &lg.id_map, unknown)?);
    }
    let opts = Preprocess {
        drop_isolated: g.drop_isolated,
        largest_component: g.largest_component,
    };
    if opts == Preprocess::default() {
        Ok(lg)
    } else {
        Ok(preprocess(&lg, opts)?)
    }
}

struct Detection {
    lambda_max: f64,
    iterations: usize,
    residual: f64,
    partition: Partition,
}

fn detect(
    lg: &LabeledGraph,
    method: PartitionMethod,
    solver: &SolverConfig64,
) -> CliResult<Detection> {
    let op = ModularityOperator64::new(&lg.graph)?;
    let eig = leading_eigenpair(&op, solver)?;
    if !eig.converged {
        return Err(Failure::NonConvergence(format!(
            "eigensolver stopped after {} iterations with residual {:e}",
            eig.iterations, eig.residual
        )));
    }
    Ok(Detection {
        lambda_max: eig.lambda_max,
        iterations: eig.iterations,
        residual: eig.residual,
        partition: partition(&eig.y, method)?,
    })
}

#[derive(Debug, Serialize)]
struct DetectParams<'a> {
    edges: &'a Path,
    labels: Option<&'a Path>,
    method: PartitionMethod,
    drop_isolated: bool,
    largest_component: bool,
    tol: f64,
    max_iter: usize,
}

#[derive(Debug, Serialize)]
struct DetectReport {
    nodes: usize,
    edges: usize,
    lambda_max: f64,
    lambda_over_n: f64,
    iterations: usize,
    residual: f64,
    community_sizes: [usize; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    detectability: Option<f64>,
}

fn cmd_detect(a: DetectArgs) -> CliResult<()> {
    let lg = load_graph(&a.graph, a.labels.as_deref())?;
    let method = a.method.into();
    let d = detect(&lg, method, &a.solver.config(a.seed))?;
    let det = match &lg.labels {
        Some(truth) => Some(detectability(&d.partition.labels, truth)?),
        None => None,
    };
    let (one, two) = d.partition.sizes();
    let n = lg.graph.node_count();
    let report = DetectReport {
        nodes: n,
        edges: lg.graph.edge_count(),
        lambda_max: d.lambda_max,
        lambda_over_n: d.lambda_max / n as f64,
        iterations: d.iterations,
        residual: d.residual,
        community_sizes: [one, two],
        detectability: det,
    };
    let params = DetectParams {
        edges: &a.graph.edges,
        labels: a.labels.as_deref(),
        method,
        drop_isolated: a.graph.drop_isolated,
        largest_component: a.graph.largest_component,
        tol: a.solver.tol,
        max_iter: a.solver.max_iter,
    };
    if let Some(path) = a.partition_out.as_deref() {
        let text: String = d
            .partition
            .labels
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{} {}\n", lg.id_map.id(i), u8::from(*c)))
            .collect();
        emit(Some(path), &text)?;
    }
    emit(
        a.out.as_deref(),
        &to_json(&RunManifest::new("detect", a.seed, params, report))?,
    )
}

#[derive(Debug, Serialize)]
struct EstimateParams<'a> {
    edges: &'a Path,
    labels: Option<&'a Path>,
    from_detection: bool,
    edge_count: EdgeCounting,
    method: PartitionMethod,
    drop_isolated: bool,
    largest_component: bool,
}

fn cmd_estimate(a: EstimateArgs) -> CliResult<()> {
    let lg = load_graph(&a.graph, a.labels.as_deref())?;
    let method: PartitionMethod = a.method.into();
    let labels: Vec<Community> = if a.from_detection {
        detect(&lg, method, &a.solver.config(a.seed))?
            .partition
            .labels
    } else {
        lg.labels.clone().expect("label file was read")
    };
    let counting = match a.edge_count {
        EdgeCountArg::Once => EdgeCounting::Once,
        EdgeCountArg::Twice => EdgeCounting::Twice,
    };
    let est: EmpiricalEstimates64 = estimate_with(&lg.graph, &labels, counting)?;
    let params = EstimateParams {
        edges: &a.graph.edges,
        labels: a.labels.as_deref(),
        from_detection: a.from_detection,
        edge_count: counting,
        method,
        drop_isolated: a.graph.drop_isolated,
        largest_component: a.graph.largest_component,
    };
    emit(
        a.out.as_deref(),
        &to_json(&RunManifest::new("estimate", a.seed, params, est))?,
    )
}

#[derive(Debug, Serialize)]
struct ConcentrationParams {
    n1: usize,
    n2: usize,
    p: f64,
    trials: usize,
    tol: f64,
    max_iter: usize,
}

#[derive(Debug, Serialize)]
struct ConcentrationTrial {
    trial: usize,
    seed: u64,
    sigma_hat: f64,
    converged: bool,
}

#[derive(Debug, Serialize)]
struct ConcentrationReport {
    trials: Vec<ConcentrationTrial>,
    mean_sigma_hat: f64,
    max_deviation: f64,
}

fn cmd_validate_concentration(a: ConcentrationArgs) -> CliResult<()> {
    if a.n1 == 0 || a.n2 == 0 {
        return Err(Failure::Usage("--n1 and --n2 must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&a.p) {
        return Err(Failure::Usage("--p must lie in [0, 1]".into()));
    }
    if a.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let scale = ((a.n1 as f64) * (a.n2 as f64)).sqrt();
    let trials = (0..a.trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(a.seed, 0, t);
            let c = generate_cross_block(a.n1, a.n2, a.p, seed)?;
            let sv = leading_singular_value(&c, &a.solver.config(seed))?;
            Ok(ConcentrationTrial {
                trial: t,
                seed,
                sigma_hat: sv.sigma / scale,
                converged: sv.converged,
            })
        })
        .collect::<Result<Vec<_>, sbm_phase::Error>>()?;
    let mean = trials.iter().map(|t| t.sigma_hat).sum::<f64>() / trials.len() as f64;
    let max_deviation = trials
        .iter()
        .map(|t| (t.sigma_hat - a.p).abs())
        .fold(0.0, f64::max);
    let failed = trials.iter().filter(|t| !t.converged).count();
    let params = ConcentrationParams {
        n1: a.n1,
        n2: a.n2,
        p: a.p,
        trials: a.trials,
        tol: a.solver.tol,
        max_iter: a.solver.max_iter,
    };
    let report = ConcentrationReport {
        trials,
        mean_sigma_hat: mean,
        max_deviation,
    };
    emit(
        a.out.as_deref(),
        &to_json(&RunManifest::new(
            "validate-concentration",
            a.seed,
            params,
            report,
        ))?,
    )?;
    if failed > 0 {
        return Err(Failure::NonConvergence(format!(
            "{failed} trial(s) did not converge"
        )));
    }
    Ok(())
}
