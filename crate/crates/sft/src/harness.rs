//! Config-driven experiment orchestration: graph setup, deterministic
//! per-trial substreams, trial-level parallelism, and CSV output.
//!
//! Reruns with the same master seed produce identical records regardless of
//! worker count; rows are canonically sorted by `(trial, algorithm)` before
//! writing. Wall-time measurement can be disabled to make the CSV bytes
//! themselves reproducible.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{ecce_estimate, netsleuth_estimate, rum_estimate, BaselineError};
use crate::diffusion::{
    sample_snapshot_window, sample_tree_snapshot_window, DiffusionError, SizeWindow, Snapshot,
    TreeModel,
};
use crate::evaluation::{hop_distance, summarize, EvalError, Summary, TrialRecord};
use crate::graph::{read_edge_list, Graph, GraphError, NodeId};
use crate::localization::{sft_estimate_with, Algorithm, LocalizationResult, TieBreak};
use crate::rng::substream;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn default_node_cap() -> usize {
    500_000
}

/// Graph source for an experiment.
///
/// `Binomial` pre-grows one fixed tree under a node budget. `BinomialLazy`
/// materializes a fresh unbounded tree around each trial's infection, which
/// is the only way sizeable infections avoid the truncation boundary of a
/// pre-grown tree; `cap` bounds the per-trial materialization.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum GraphSpec {
    Er {
        n: usize,
        p: f64,
    },
    Binomial {
        m: u32,
        beta: f64,
        budget: usize,
    },
    BinomialLazy {
        m: u32,
        beta: f64,
        #[serde(default = "default_node_cap")]
        cap: usize,
    },
    File {
        path: PathBuf,
    },
}

/// Uniform range for edge transmission probabilities.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WeightRange {
    pub lo: f64,
    pub hi: f64,
}

fn default_gammas() -> Vec<f64> {
    vec![1.0, 5.0, 10.0, 20.0]
}

fn default_max_attempts() -> usize {
    1000
}

fn default_true() -> bool {
    true
}

/// A full experiment: graph, target infection sizes, algorithms, seeds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    /// Draw edge weights uniformly from this range; omit to keep the
    /// generator's or file's weights.
    #[serde(default)]
    pub weights: Option<WeightRange>,
    /// Target infection sizes x; each gets the window [0.75x, 1.25x] unless
    /// `window` overrides it with absolute bounds.
    pub sizes: Vec<usize>,
    pub samples: usize,
    pub algorithms: Vec<Algorithm>,
    pub master_seed: u64,
    #[serde(default = "default_gammas")]
    pub gammas: Vec<f64>,
    #[serde(default)]
    pub window: Option<SizeWindow>,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: usize,
    /// Measure per-call wall time. Disable for byte-identical output files.
    #[serde(default = "default_true")]
    pub measure_time: bool,
    #[serde(default)]
    pub records_out: Option<PathBuf>,
    #[serde(default)]
    pub summary_out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<ExperimentConfig, HarnessError> {
        let text = fs::read_to_string(&path)?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.as_ref().display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let err = |msg: String| Err(HarnessError::Config(msg));
        match &self.graph {
            GraphSpec::Er { n, p } => {
                if *n < 1 {
                    return err("graph.n must be at least 1".into());
                }
                if !(0.0..=1.0).contains(p) {
                    return err(format!("graph.p {p} outside [0, 1]"));
                }
            }
            GraphSpec::Binomial { beta, budget, .. } => {
                if !(0.0..=1.0).contains(beta) {
                    return err(format!("graph.beta {beta} outside [0, 1]"));
                }
                if *budget < 1 {
                    return err("graph.budget must be at least 1".into());
                }
            }
            GraphSpec::BinomialLazy { beta, cap, .. } => {
                if !(0.0..=1.0).contains(beta) {
                    return err(format!("graph.beta {beta} outside [0, 1]"));
                }
                if *cap < 1 {
                    return err("graph.cap must be at least 1".into());
                }
            }
            GraphSpec::File { .. } => {}
        }
        if let Some(w) = &self.weights {
            if !(0.0 <= w.lo && w.lo <= w.hi && w.hi <= 1.0) {
                return err(format!("weights [{}, {}] invalid", w.lo, w.hi));
            }
        }
        if self.sizes.is_empty() || self.sizes.iter().any(|&x| x < 1) {
            return err("sizes must be nonempty positive targets".into());
        }
        if self.algorithms.is_empty() {
            return err("algorithms must be nonempty".into());
        }
        for &g in &self.gammas {
            if !(g > 0.0 && g <= 100.0) {
                return err(format!("gamma {g} outside (0, 100]"));
            }
        }
        if self.max_attempts < 1 {
            return err("max_attempts must be at least 1".into());
        }
        Ok(())
    }
}

// Substream path tags.
const STREAM_TOPOLOGY: u64 = 0;
const STREAM_WEIGHTS: u64 = 1;
const STREAM_TRIAL: u64 = 2;
const STREAM_TIEBREAK: u64 = 3;

/// Build the configured graph, deterministically from the master seed.
/// Lazy tree specs have no shared graph; their trees exist per trial.
pub fn build_graph(cfg: &ExperimentConfig) -> Result<Graph, HarnessError> {
    let g = match &cfg.graph {
        GraphSpec::Er { n, p } => {
            Graph::erdos_renyi(*n, *p, &mut substream(cfg.master_seed, &[STREAM_TOPOLOGY]))
        }
        GraphSpec::Binomial { m, beta, budget } => Graph::binomial_tree(
            *m,
            *beta,
            *budget,
            &mut substream(cfg.master_seed, &[STREAM_TOPOLOGY]),
        ),
        GraphSpec::BinomialLazy { .. } => {
            return Err(HarnessError::Config(
                "binomial-lazy trees are materialized per trial and cannot be pre-built".into(),
            ))
        }
        GraphSpec::File { path } => read_edge_list(path)?.graph,
    };
    match &cfg.weights {
        Some(w) => Ok(g.assign_weights(
            w.lo,
            w.hi,
            &mut substream(cfg.master_seed, &[STREAM_WEIGHTS]),
        )?),
        None => Ok(g),
    }
}

/// A trial (or one algorithm within a trial) that produced no record.
#[derive(Debug, Clone, Serialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub size: usize,
    pub sample: usize,
    /// None when the snapshot itself could not be drawn, which loses the
    /// whole trial; otherwise only this algorithm's record is missing.
    pub algorithm: Option<Algorithm>,
    pub error: String,
}

/// Everything an experiment run produces.
pub struct ExperimentOutput {
    pub records: Vec<TrialRecord>,
    pub summaries: Vec<Summary>,
    pub failures: Vec<TrialFailure>,
    /// Target size of each global trial index, for grouping.
    pub trial_sizes: Vec<usize>,
}

fn run_algorithm(
    algorithm: Algorithm,
    g: &Graph,
    snapshot: &Snapshot,
    master_seed: u64,
    size_index: usize,
    sample_index: usize,
) -> Result<LocalizationResult, BaselineError> {
    match algorithm {
        Algorithm::SftWbnd => Ok(sft_estimate_with(g, snapshot, TieBreak::Wbnd, false)?),
        Algorithm::SftBnd => Ok(sft_estimate_with(g, snapshot, TieBreak::Bnd, false)?),
        Algorithm::Ecce => {
            let mut rng = substream(
                master_seed,
                &[STREAM_TIEBREAK, size_index as u64, sample_index as u64],
            );
            ecce_estimate(g, snapshot, &mut rng)
        }
        Algorithm::Rum => rum_estimate(g, snapshot),
        Algorithm::Netsleuth => netsleuth_estimate(g, snapshot),
    }
}

/// Run the sweep: for every (size, sample) draw one snapshot and run every
/// configured algorithm on it. Trials run in parallel on the current rayon
/// pool; per-trial substreams keep the output independent of scheduling.
/// Failed trials are quarantined, not fatal.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput, HarnessError> {
    cfg.validate()?;
    let shared: Option<Graph> = match &cfg.graph {
        GraphSpec::BinomialLazy { .. } => None,
        _ => Some(build_graph(cfg)?),
    };
    let trials: Vec<(usize, usize)> = (0..cfg.sizes.len())
        .flat_map(|si| (0..cfg.samples).map(move |xi| (si, xi)))
        .collect();

    let results: Vec<(Vec<TrialRecord>, Vec<TrialFailure>)> = trials
        .par_iter()
        .map(|&(size_index, sample_index)| {
            let trial = size_index * cfg.samples + sample_index;
            let x = cfg.sizes[size_index];
            let window = cfg.window.unwrap_or_else(|| SizeWindow::around(x));
            let mut rng = substream(
                cfg.master_seed,
                &[STREAM_TRIAL, size_index as u64, sample_index as u64],
            );
            let fail = |algorithm: Option<Algorithm>, e: String| TrialFailure {
                trial,
                size: x,
                sample: sample_index,
                algorithm,
                error: e,
            };
            let drawn: Result<(Option<Graph>, Snapshot), TrialFailure> = match (&shared, &cfg.graph)
            {
                (Some(g), _) => sample_snapshot_window(g, window, cfg.max_attempts, &mut rng)
                    .map(|snap| (None, snap))
                    .map_err(|e: DiffusionError| fail(None, e.to_string())),
                (None, GraphSpec::BinomialLazy { m, beta, cap }) => {
                    let (q_lo, q_hi) = cfg.weights.map(|w| (w.lo, w.hi)).unwrap_or((1.0, 1.0));
                    let model = TreeModel {
                        m: *m,
                        beta: *beta,
                        q_lo,
                        q_hi,
                    };
                    sample_tree_snapshot_window(model, window, *cap, cfg.max_attempts, &mut rng)
                        .map(|(g, snap)| (Some(g), snap))
                        .map_err(|e| fail(None, e.to_string()))
                }
                (None, _) => unreachable!("shared graph exists for non-lazy specs"),
            };
            let (owned, snapshot) = match drawn {
                Ok(pair) => pair,
                Err(f) => return (Vec::new(), vec![f]),
            };
            let g: &Graph = owned
                .as_ref()
                .or(shared.as_ref())
                .expect("one graph source");
            let truth = snapshot
                .truth
                .as_ref()
                .expect("simulated snapshots carry truth");
            let (source, obs_time) = (truth.source, truth.obs_time);
            let mut records = Vec::with_capacity(cfg.algorithms.len());
            let mut failures = Vec::new();
            for &algorithm in &cfg.algorithms {
                let started = Instant::now();
                let res = run_algorithm(
                    algorithm,
                    g,
                    &snapshot,
                    cfg.master_seed,
                    size_index,
                    sample_index,
                );
                let seconds = if cfg.measure_time {
                    started.elapsed().as_secs_f64()
                } else {
                    0.0
                };
                let res = match res {
                    Ok(res) => res,
                    Err(e) => {
                        // One localizer failing must not discard the others.
                        failures.push(fail(Some(algorithm), e.to_string()));
                        continue;
                    }
                };
                let rank_of_truth = res
                    .rank_of(source)
                    .expect("truth is infected, ranking covers I");
                let hop = hop_distance(g, res.estimator, source).expect("same component");
                records.push(TrialRecord {
                    algorithm,
                    trial,
                    source,
                    estimator: res.estimator,
                    rank_of_truth,
                    hop_distance: hop,
                    infected: snapshot.infected_count(),
                    obs_time,
                    seconds,
                });
            }
            (records, failures)
        })
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (rs, fs) in results {
        records.extend(rs);
        failures.extend(fs);
    }
    records.sort_by_key(|r| (r.trial, r.algorithm));

    let trial_sizes: Vec<usize> = trials.iter().map(|&(si, _)| cfg.sizes[si]).collect();
    let summaries = if records.is_empty() {
        Vec::new()
    } else {
        summarize(
            &records,
            |r| format!("{},{}", r.algorithm, trial_sizes[r.trial]),
            &cfg.gammas,
        )?
    };
    Ok(ExperimentOutput {
        records,
        summaries,
        failures,
        trial_sizes,
    })
}

/// Records CSV, one row per trial and algorithm.
pub fn records_csv(records: &[TrialRecord]) -> String {
    let mut out =
        String::from("algorithm,trial,source,estimator,rank,distance,infected,obs_time,seconds\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{:.9}",
            r.algorithm,
            r.trial,
            r.source,
            r.estimator,
            r.rank_of_truth,
            r.hop_distance,
            r.infected,
            r.obs_time,
            r.seconds
        )
        .expect("string write");
    }
    out
}

/// Summary CSV, one row per (algorithm, size) group.
pub fn summary_csv(summaries: &[Summary], gammas: &[f64]) -> String {
    let mut out = String::from(
        "algorithm,size,trials,detection_rate,detection_ci95,mean_distance,distance_ci95,mean_seconds",
    );
    for g in gammas {
        write!(out, ",gamma_{g}").expect("string write");
    }
    out.push('\n');
    for s in summaries {
        write!(
            out,
            "{},{},{:.6},{:.6},{:.6},{:.6},{:.9}",
            s.key,
            s.count,
            s.detection_rate,
            s.detection_ci95,
            s.mean_distance,
            s.distance_ci95,
            s.mean_seconds
        )
        .expect("string write");
        for &(_, rate) in &s.gamma_accuracy {
            write!(out, ",{rate:.6}").expect("string write");
        }
        out.push('\n');
    }
    out
}

/// Run an experiment and write its CSV outputs.
pub fn run_experiment_to_files(
    cfg: &ExperimentConfig,
    records_path: Option<&Path>,
    summary_path: Option<&Path>,
) -> Result<ExperimentOutput, HarnessError> {
    let out = run_experiment(cfg)?;
    if let Some(p) = records_path.or(cfg.records_out.as_deref()) {
        fs::write(p, records_csv(&out.records))?;
    }
    if let Some(p) = summary_path.or(cfg.summary_out.as_deref()) {
        fs::write(p, summary_csv(&out.summaries, &cfg.gammas))?;
    }
    Ok(out)
}

/// Benchmark configuration: time the short-fat-tree estimator across
/// infection sizes on one graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchConfig {
    pub graph: GraphSpec,
    #[serde(default)]
    pub weights: Option<WeightRange>,
    pub sizes: Vec<usize>,
    /// Snapshots drawn per size.
    #[serde(default = "default_bench_snapshots")]
    pub snapshots_per_size: usize,
    /// Timed repetitions per snapshot.
    #[serde(default = "default_bench_reps")]
    pub reps: usize,
    pub master_seed: u64,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: usize,
    /// Abort BFS passes that cannot improve on the best eccentricity.
    #[serde(default)]
    pub early_exit: bool,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_bench_snapshots() -> usize {
    3
}

fn default_bench_reps() -> usize {
    2
}

impl BenchConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<BenchConfig, HarnessError> {
        let text = fs::read_to_string(&path)?;
        let cfg: BenchConfig = serde_json::from_str(&text)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.as_ref().display())))?;
        Ok(cfg)
    }

    fn as_experiment(&self) -> ExperimentConfig {
        ExperimentConfig {
            graph: self.graph.clone(),
            weights: self.weights,
            sizes: self.sizes.clone(),
            samples: self.snapshots_per_size,
            algorithms: vec![Algorithm::SftBnd],
            master_seed: self.master_seed,
            gammas: default_gammas(),
            window: None,
            max_attempts: self.max_attempts,
            measure_time: true,
            records_out: None,
            summary_out: None,
        }
    }
}

/// One timing observation: infection size, total degree of the infected set
/// in the full graph, and the wall time of a single estimator call.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub size: usize,
    pub snapshot: usize,
    pub rep: usize,
    pub infected: usize,
    pub total_degree: usize,
    pub seconds: f64,
    pub estimator: NodeId,
}

/// Wall-time the estimator across infection sizes. Snapshots are drawn with
/// the same windowed protocol as experiments; timing runs serially.
pub fn bench_sft(cfg: &BenchConfig) -> Result<Vec<BenchRow>, HarnessError> {
    let exp = cfg.as_experiment();
    exp.validate()?;
    let g = build_graph(&exp)?;
    let mut rows = Vec::new();
    for (size_index, &x) in cfg.sizes.iter().enumerate() {
        for snapshot_index in 0..cfg.snapshots_per_size {
            let mut rng = substream(
                cfg.master_seed,
                &[STREAM_TRIAL, size_index as u64, snapshot_index as u64],
            );
            let snapshot =
                sample_snapshot_window(&g, SizeWindow::around(x), cfg.max_attempts, &mut rng)
                    .map_err(|e| HarnessError::Config(format!("size {x}: {e}")))?;
            let total_degree: usize = snapshot.infected.iter().map(|&v| g.degree(v)).sum();
            for rep in 0..cfg.reps.max(1) {
                let started = Instant::now();
                let res = sft_estimate_with(&g, &snapshot, TieBreak::Bnd, cfg.early_exit)
                    .map_err(|e| HarnessError::Config(e.to_string()))?;
                let seconds = started.elapsed().as_secs_f64();
                rows.push(BenchRow {
                    size: x,
                    snapshot: snapshot_index,
                    rep,
                    infected: snapshot.infected_count(),
                    total_degree,
                    seconds,
                    estimator: res.estimator,
                });
            }
        }
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("size,snapshot,rep,infected,total_degree,seconds,estimator\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{:.9},{}",
            r.size, r.snapshot, r.rep, r.infected, r.total_degree, r.seconds, r.estimator
        )
        .expect("string write");
    }
    out
}

/// Run a closure on a rayon pool with the given number of workers
/// (0 = rayon default).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::write_edge_list;

    fn p5_file(dir: &Path) -> PathBuf {
        let g = Graph::build(5, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)]).unwrap();
        let path = dir.join("p5.tsv");
        write_edge_list(&g, &path).unwrap();
        path
    }

    fn p5_config(dir: &Path) -> ExperimentConfig {
        ExperimentConfig {
            graph: GraphSpec::File { path: p5_file(dir) },
            weights: None,
            sizes: vec![5],
            samples: 4,
            algorithms: Algorithm::ALL.to_vec(),
            master_seed: 11,
            gammas: vec![20.0, 100.0],
            window: Some(SizeWindow { lo: 5, hi: 5 }),
            max_attempts: 50,
            measure_time: false,
            records_out: None,
            summary_out: None,
        }
    }

    #[test]
    fn zero_samples_yield_empty_csv_with_header() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = p5_config(dir.path());
        cfg.samples = 0;
        let out = run_experiment(&cfg).unwrap();
        assert!(out.records.is_empty());
        assert_eq!(
            records_csv(&out.records),
            "algorithm,trial,source,estimator,rank,distance,infected,obs_time,seconds\n"
        );
    }

    #[test]
    fn every_algorithm_reports_once_per_sample() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = p5_config(dir.path());
        let out = run_experiment(&cfg).unwrap();
        assert!(out.failures.is_empty());
        assert_eq!(out.records.len(), cfg.samples * cfg.algorithms.len());
        for trial in 0..cfg.samples {
            let mut algos: Vec<Algorithm> = out
                .records
                .iter()
                .filter(|r| r.trial == trial)
                .map(|r| r.algorithm)
                .collect();
            algos.sort();
            assert_eq!(algos, Algorithm::ALL.to_vec());
        }
        // Window was forced to [5, 5]: everything infected each trial.
        assert!(out.records.iter().all(|r| r.infected == 5));
    }

    #[test]
    fn reruns_are_byte_identical_across_worker_counts() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig {
            graph: GraphSpec::Er { n: 200, p: 0.02 },
            weights: Some(WeightRange { lo: 0.2, hi: 0.5 }),
            sizes: vec![20, 40],
            samples: 6,
            algorithms: Algorithm::ALL.to_vec(),
            master_seed: 3,
            gammas: vec![10.0],
            window: None,
            max_attempts: 400,
            measure_time: false,
            records_out: None,
            summary_out: None,
        };
        let serial = with_workers(1, || run_experiment(&cfg).unwrap());
        let parallel = with_workers(4, || run_experiment(&cfg).unwrap());
        assert_eq!(records_csv(&serial.records), records_csv(&parallel.records));
        assert_eq!(
            summary_csv(&serial.summaries, &cfg.gammas),
            summary_csv(&parallel.summaries, &cfg.gammas)
        );
        let _ = dir;
    }

    #[test]
    fn failures_are_quarantined() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = p5_config(dir.path());
        // Impossible window on a 5-node graph: every trial fails, none abort.
        cfg.window = Some(SizeWindow { lo: 9, hi: 9 });
        cfg.max_attempts = 3;
        let out = run_experiment(&cfg).unwrap();
        assert!(out.records.is_empty());
        assert_eq!(out.failures.len(), cfg.samples);
        assert!(out.failures.iter().all(|f| f.algorithm.is_none()));
    }

    /// Row-count identity: every (trial, algorithm) pair either has a record
    /// or a recorded failure (a lost snapshot loses all algorithms).
    #[test]
    fn record_count_accounts_for_failures() {
        let dir = tempfile::tempdir().unwrap();
        for window in [None, Some(SizeWindow { lo: 9, hi: 9 })] {
            let mut cfg = p5_config(dir.path());
            cfg.window = window.or(cfg.window);
            cfg.max_attempts = 3;
            let out = run_experiment(&cfg).unwrap();
            let lost: usize = out
                .failures
                .iter()
                .map(|f| {
                    if f.algorithm.is_some() {
                        1
                    } else {
                        cfg.algorithms.len()
                    }
                })
                .sum();
            assert_eq!(
                out.records.len() + lost,
                cfg.samples * cfg.algorithms.len() * cfg.sizes.len()
            );
        }
    }

    #[test]
    fn config_validation_names_fields() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = p5_config(dir.path());
        cfg.gammas = vec![0.0];
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("gamma"), "{err}");

        let mut cfg = p5_config(dir.path());
        cfg.sizes = vec![];
        assert!(cfg.validate().is_err());

        let bad = ExperimentConfig {
            graph: GraphSpec::Er { n: 10, p: 1.5 },
            ..p5_config(dir.path())
        };
        assert!(bad.validate().unwrap_err().to_string().contains("graph.p"));
    }

    #[test]
    fn bench_rows_cover_sizes() {
        let cfg = BenchConfig {
            graph: GraphSpec::Er { n: 300, p: 0.03 },
            weights: Some(WeightRange { lo: 0.3, hi: 0.6 }),
            sizes: vec![20, 60],
            snapshots_per_size: 2,
            reps: 2,
            master_seed: 5,
            max_attempts: 500,
            early_exit: false,
            out: None,
        };
        let rows = bench_sft(&cfg).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 2);
        for r in &rows {
            assert!(r.infected > 0 && r.total_degree > 0);
            assert!(r.seconds >= 0.0);
        }
        // Same snapshot, same estimator across reps.
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].estimator, pair[1].estimator);
        }
        let csv = bench_csv(&rows);
        assert!(csv.starts_with("size,snapshot,rep,infected,total_degree,seconds,estimator\n"));
        assert_eq!(csv.lines().count(), 1 + rows.len());
    }

    #[test]
    fn bench_degenerate_size_is_fast() {
        let cfg = BenchConfig {
            graph: GraphSpec::Er { n: 100, p: 0.05 },
            weights: Some(WeightRange { lo: 0.2, hi: 0.5 }),
            sizes: vec![1],
            snapshots_per_size: 1,
            reps: 3,
            master_seed: 6,
            max_attempts: 10,
            early_exit: false,
            out: None,
        };
        let rows = bench_sft(&cfg).unwrap();
        for r in &rows {
            assert_eq!(r.infected, 1);
            assert!(
                r.seconds < 1e-3,
                "single-node localization took {}s",
                r.seconds
            );
        }
    }
}
