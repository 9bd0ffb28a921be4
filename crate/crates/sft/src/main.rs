//! Command-line driver: graph generation, diffusion simulation, snapshot
//! localization, experiment sweeps, and estimator benchmarks.
//!
//! Exit codes: 0 success, 1 usage error (bad flags, missing files),
//! 2 data error (malformed or inconsistent inputs).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use sft::diffusion::{
    sample_snapshot_window, simulate_ic, validate_snapshot, SizeWindow, Snapshot,
};
use sft::graph::{read_edge_list, write_edge_list, Graph, LoadedGraph, NodeId};
use sft::harness::{
    bench_csv, bench_sft, records_csv, run_experiment, summary_csv, with_workers, BenchConfig,
    ExperimentConfig, GraphSpec, HarnessError, WeightRange,
};
use sft::localization::{sft_estimate, Algorithm, LocalizationResult, TieBreak};
use sft::rng::substream;

/// Write to stdout, exiting quietly if the reader closed the pipe.
fn emit(text: std::fmt::Arguments) {
    let mut out = std::io::stdout();
    if let Err(e) = out.write_fmt(text) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(2);
    }
}

macro_rules! outln {
    ($($arg:tt)*) => { emit(format_args!("{}\n", format_args!($($arg)*))) };
}

macro_rules! outp {
    ($($arg:tt)*) => { emit(format_args!($($arg)*)) };
}

#[derive(Parser)]
#[command(name = "sft", version, about = "Diffusion source localization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    Generate(GenerateArgs),
    /// Simulate a diffusion on a graph and write the snapshot.
    Simulate(SimulateArgs),
    /// Localize the source of a snapshot and print the estimator.
    Localize(LocalizeArgs),
    /// Run a config-driven experiment sweep and write records/summary CSVs.
    Experiment(ExperimentArgs),
    /// Time the short-fat-tree estimator across infection sizes.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Inline spec `er:N:P` or `binomial:M:BETA:BUDGET`, optionally with a
    /// weight range appended as `:LO:HI`; or a config JSON via --config.
    #[arg(long)]
    graph: Option<String>,
    /// JSON with {"graph": ..., "weights": ..., "master_seed": ...}.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Edge-list file of the graph to diffuse on.
    #[arg(long)]
    graph: PathBuf,
    /// JSON with either {"source": u, "rounds": t} or
    /// {"x": target, "max_attempts": k}; source may be omitted with rounds.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LocalizeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    snapshot: PathBuf,
    /// One of sft-wbnd, sft-bnd, ecce, rum, netsleuth.
    #[arg(long)]
    algo: Algorithm,
    /// Tie-break stream for ecce.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's records output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: RB_WORKERS or all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Override the config's top-percent accuracy levels, e.g. --gamma 1,5,10.
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<f64>>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    /// Override the config's output path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) => m,
        }
    }
}

/// Opening an input that does not exist is a usage error; anything wrong
/// with its content is a data error.
fn read_input(path: &Path, what: &str) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot open {what} {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<LoadedGraph, CliError> {
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "cannot open graph {}",
            path.display()
        )));
    }
    read_edge_list(path).map_err(|e| CliError::Data(format!("graph {}: {e}", path.display())))
}

fn write_output(path: &Path, contents: &str, what: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Data(format!("cannot write {what} {}: {e}", path.display())))
}

fn parse_inline_graph(spec: &str) -> Result<(GraphSpec, Option<WeightRange>), CliError> {
    let usage = |msg: String| CliError::Usage(msg);
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str, what: &str| -> Result<f64, CliError> {
        s.parse::<f64>()
            .map_err(|_| usage(format!("bad {what} '{s}' in --graph spec")))
    };
    let weights = |rest: &[&str]| -> Result<Option<WeightRange>, CliError> {
        match rest {
            [] => Ok(None),
            [lo, hi] => Ok(Some(WeightRange {
                lo: num(lo, "weight lo")?,
                hi: num(hi, "weight hi")?,
            })),
            _ => Err(usage(format!("trailing fields in --graph spec '{spec}'"))),
        }
    };
    match parts.as_slice() {
        ["er", n, p, rest @ ..] => Ok((
            GraphSpec::Er {
                n: n.parse().map_err(|_| usage(format!("bad n '{n}'")))?,
                p: num(p, "p")?,
            },
            weights(rest)?,
        )),
        ["binomial", m, beta, budget, rest @ ..] => Ok((
            GraphSpec::Binomial {
                m: m.parse().map_err(|_| usage(format!("bad m '{m}'")))?,
                beta: num(beta, "beta")?,
                budget: budget.parse().map_err(|_| usage(format!("bad budget '{budget}'")))?,
            },
            weights(rest)?,
        )),
        _ => Err(usage(format!(
            "--graph spec '{spec}' not understood (er:N:P or binomial:M:BETA:BUDGET, optional :LO:HI)"
        ))),
    }
}

#[derive(Deserialize)]
struct GenerateConfig {
    graph: GraphSpec,
    #[serde(default)]
    weights: Option<WeightRange>,
    #[serde(default)]
    master_seed: Option<u64>,
}

fn harness_error(e: HarnessError) -> CliError {
    match e {
        HarnessError::Io(e) => CliError::Usage(format!("io error: {e}")),
        other => CliError::Data(other.to_string()),
    }
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), CliError> {
    let (spec, weights, cfg_seed) = match (&args.graph, &args.config) {
        (Some(inline), None) => {
            let (spec, weights) = parse_inline_graph(inline)?;
            (spec, weights, None)
        }
        (None, Some(path)) => {
            let text = read_input(path, "config")?;
            let cfg: GenerateConfig = serde_json::from_str(&text)
                .map_err(|e| CliError::Data(format!("config {}: {e}", path.display())))?;
            (cfg.graph, cfg.weights, cfg.master_seed)
        }
        _ => {
            return Err(CliError::Usage(
                "generate needs exactly one of --graph or --config".into(),
            ))
        }
    };
    let seed = args.seed.or(cfg_seed).ok_or_else(|| {
        CliError::Usage("generate needs --seed (or master_seed in the config)".into())
    })?;
    let cfg = ExperimentConfig {
        graph: spec,
        weights,
        sizes: vec![1],
        samples: 0,
        algorithms: vec![Algorithm::SftBnd],
        master_seed: seed,
        gammas: vec![10.0],
        window: None,
        max_attempts: 1,
        measure_time: false,
        records_out: None,
        summary_out: None,
    };
    cfg.validate().map_err(|e| CliError::Data(e.to_string()))?;
    let g = sft::harness::build_graph(&cfg).map_err(harness_error)?;
    write_edge_list(&g, &args.out)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", args.out.display())))?;
    outln!(
        "wrote {} nodes, {} edges to {}",
        g.node_count(),
        g.edge_count(),
        args.out.display()
    );
    Ok(())
}

#[derive(Deserialize)]
struct SimulateConfig {
    #[serde(default)]
    source: Option<NodeId>,
    #[serde(default)]
    rounds: Option<u32>,
    #[serde(default)]
    x: Option<usize>,
    #[serde(default = "default_attempts")]
    max_attempts: usize,
}

fn default_attempts() -> usize {
    1000
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let loaded = load_graph(&args.graph)?;
    let g = &loaded.graph;
    let text = read_input(&args.config, "config")?;
    let cfg: SimulateConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("config {}: {e}", args.config.display())))?;
    let mut rng = substream(args.seed, &[100]);
    let snap = match (cfg.rounds, cfg.x) {
        (Some(t), None) => {
            let source = cfg.source.unwrap_or_else(|| {
                use rand::Rng;
                rng.random_range(0..g.node_count())
            });
            simulate_ic(g, source, t, &mut rng)
                .map_err(|e| CliError::Data(format!("simulate: {e}")))?
        }
        (None, Some(x)) => {
            if cfg.source.is_some() {
                return Err(CliError::Usage(
                    "config field source is only valid with rounds; the size window draws its own"
                        .into(),
                ));
            }
            sample_snapshot_window(g, SizeWindow::around(x), cfg.max_attempts, &mut rng)
                .map_err(|e| CliError::Data(format!("simulate: {e}")))?
        }
        _ => {
            return Err(CliError::Usage(
                "config must set exactly one of rounds or x".into(),
            ))
        }
    };
    let mut json = serde_json::to_string_pretty(&snap).expect("snapshot serializes");
    json.push('\n');
    write_output(&args.out, &json, "snapshot")?;
    outln!(
        "infected {} of {} nodes at t={} (source {})",
        snap.infected_count(),
        snap.n,
        snap.truth.as_ref().map(|t| t.obs_time).unwrap_or(0),
        snap.truth
            .as_ref()
            .map(|t| loaded.label(t.source))
            .unwrap_or_default(),
    );
    Ok(())
}

fn run_localizer(
    algo: Algorithm,
    g: &Graph,
    snap: &Snapshot,
    seed: u64,
) -> Result<LocalizationResult, CliError> {
    let data = |e: String| CliError::Data(e);
    match algo {
        Algorithm::SftWbnd => {
            sft_estimate(g, snap, TieBreak::Wbnd).map_err(|e| data(e.to_string()))
        }
        Algorithm::SftBnd => sft_estimate(g, snap, TieBreak::Bnd).map_err(|e| data(e.to_string())),
        Algorithm::Ecce => sft::baselines::ecce_estimate(g, snap, &mut substream(seed, &[101]))
            .map_err(|e| data(e.to_string())),
        Algorithm::Rum => sft::baselines::rum_estimate(g, snap).map_err(|e| data(e.to_string())),
        Algorithm::Netsleuth => {
            sft::baselines::netsleuth_estimate(g, snap).map_err(|e| data(e.to_string()))
        }
    }
}

fn cmd_localize(args: &LocalizeArgs) -> Result<(), CliError> {
    let loaded = load_graph(&args.graph)?;
    let g = &loaded.graph;
    let text = read_input(&args.snapshot, "snapshot")?;
    let mut snap: Snapshot = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("snapshot {}: {e}", args.snapshot.display())))?;
    snap.normalize();
    validate_snapshot(g, &snap)
        .map_err(|e| CliError::Data(format!("snapshot {}: {e}", args.snapshot.display())))?;
    let res = run_localizer(args.algo, g, &snap, args.seed)?;
    outln!("{}", loaded.label(res.estimator));
    let head = 10.min(res.scores.len());
    for (i, s) in res.scores[..head].iter().enumerate() {
        let ecc = s
            .eccentricity
            .map(|e| e.to_string())
            .unwrap_or_else(|| "-".into());
        outln!(
            "{}\t{}\tecc={}\tscore={:.6}",
            i + 1,
            loaded.label(s.node),
            ecc,
            s.score
        );
    }
    Ok(())
}

fn workers_from(args_workers: Option<usize>) -> usize {
    args_workers
        .or_else(|| {
            std::env::var("RB_WORKERS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0)
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<(), CliError> {
    if !args.config.exists() {
        return Err(CliError::Usage(format!(
            "cannot open config {}",
            args.config.display()
        )));
    }
    let mut cfg = ExperimentConfig::from_file(&args.config).map_err(harness_error)?;
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(gammas) = &args.gamma {
        cfg.gammas = gammas.clone();
    }
    if let Some(out) = &args.out {
        cfg.records_out = Some(out.clone());
    }
    cfg.validate().map_err(|e| CliError::Data(e.to_string()))?;
    let out =
        with_workers(workers_from(args.workers), || run_experiment(&cfg)).map_err(harness_error)?;
    for f in &out.failures {
        let what = f
            .algorithm
            .map(|a| a.to_string())
            .unwrap_or_else(|| "snapshot".into());
        eprintln!(
            "trial {} (size {}, sample {}) {what}: {}",
            f.trial, f.size, f.sample, f.error
        );
    }
    if let Some(path) = &cfg.records_out {
        write_output(path, &records_csv(&out.records), "records")?;
    }
    let summary_path = cfg.summary_out.clone().or_else(|| {
        cfg.records_out
            .as_ref()
            .map(|p| p.with_extension("summary.csv"))
    });
    let summary = summary_csv(&out.summaries, &cfg.gammas);
    if let Some(path) = &summary_path {
        write_output(path, &summary, "summary")?;
    }
    outp!("{summary}");
    outln!(
        "{} records, {} failures{}",
        out.records.len(),
        out.failures.len(),
        cfg.records_out
            .as_ref()
            .map(|p| format!(", records in {}", p.display()))
            .unwrap_or_default()
    );
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    if !args.config.exists() {
        return Err(CliError::Usage(format!(
            "cannot open config {}",
            args.config.display()
        )));
    }
    let mut cfg = BenchConfig::from_file(&args.config).map_err(harness_error)?;
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    let rows = bench_sft(&cfg).map_err(harness_error)?;
    let csv = bench_csv(&rows);
    if let Some(path) = args.out.as_ref().or(cfg.out.as_ref()) {
        write_output(path, &csv, "bench rows")?;
    }
    outp!("{csv}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are not errors.
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Localize(args) => cmd_localize(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
