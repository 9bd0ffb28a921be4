//! Scoring of localization trials (detection rate, distance, top-percent
//! accuracy), an exact posterior oracle for small trees based on live-edge
//! enumeration, and the observation-time threshold calculator.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffusion::Snapshot;
use crate::graph::{Graph, NodeId};
use crate::localization::{Algorithm, InfectionSubgraph};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no records to aggregate")]
    EmptyRecords,
    #[error("gamma must be in (0, 100], got {0}")]
    InvalidGamma(f64),
    #[error("nodes {0} and {1} are not connected")]
    UnreachablePair(NodeId, NodeId),
    #[error("node {0} out of range for graph of {1} nodes")]
    NodeOutOfRange(NodeId, usize),
    #[error("graph is not a tree")]
    NotATree,
    #[error("tree has {0} edges, oracle is capped at {1}")]
    TooLarge(usize, usize),
    #[error("no candidate explains the snapshot with positive probability")]
    InfeasibleSnapshot,
    #[error("time prior is invalid: {0}")]
    InvalidPrior(String),
    #[error("threshold undefined: mu*q = {0} must exceed 1")]
    InvalidRegime(f64),
}

/// One diffusion + localization outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub algorithm: Algorithm,
    /// Global trial index within the experiment.
    pub trial: usize,
    pub source: NodeId,
    pub estimator: NodeId,
    /// 1-based position of the true source in the algorithm's ranking.
    pub rank_of_truth: usize,
    /// Hops from the estimator to the true source.
    pub hop_distance: u32,
    /// Infection size of the snapshot.
    pub infected: usize,
    pub obs_time: u32,
    /// Wall time of the localization call (0 when timing is disabled).
    pub seconds: f64,
}

/// Fraction of trials whose estimator is the true source.
pub fn detection_rate(records: &[TrialRecord]) -> Result<f64, EvalError> {
    if records.is_empty() {
        return Err(EvalError::EmptyRecords);
    }
    let hits = records.iter().filter(|r| r.hop_distance == 0).count();
    Ok(hits as f64 / records.len() as f64)
}

/// Fraction of trials where the true source is ranked in the top `gamma`
/// percent of the infected nodes.
pub fn gamma_accuracy(records: &[TrialRecord], gamma: f64) -> Result<f64, EvalError> {
    if !(gamma > 0.0 && gamma <= 100.0) {
        return Err(EvalError::InvalidGamma(gamma));
    }
    if records.is_empty() {
        return Err(EvalError::EmptyRecords);
    }
    let hits = records
        .iter()
        .filter(|r| {
            let cutoff = (gamma / 100.0 * r.infected as f64).ceil() as usize;
            r.rank_of_truth <= cutoff
        })
        .count();
    Ok(hits as f64 / records.len() as f64)
}

/// Hop distance between two nodes of the same component.
pub fn hop_distance(g: &Graph, a: NodeId, b: NodeId) -> Result<u32, EvalError> {
    let n = g.node_count();
    if a >= n {
        return Err(EvalError::NodeOutOfRange(a, n));
    }
    if b >= n {
        return Err(EvalError::NodeOutOfRange(b, n));
    }
    let d = g.bfs_distances(a).expect("checked range");
    d.get(b).ok_or(EvalError::UnreachablePair(a, b))
}

/// Nonincreasing probability mass over observation times t >= 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum TimePrior {
    /// pmf(t) = (1 - ratio) * ratio^t.
    Geometric { ratio: f64 },
    /// Explicit mass per time, starting at t = 0.
    Table(Vec<f64>),
}

impl TimePrior {
    pub fn geometric_half() -> TimePrior {
        TimePrior::Geometric { ratio: 0.5 }
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        match self {
            TimePrior::Geometric { ratio } => {
                if !(*ratio > 0.0 && *ratio < 1.0) {
                    return Err(EvalError::InvalidPrior(format!(
                        "geometric ratio {ratio} outside (0, 1)"
                    )));
                }
            }
            TimePrior::Table(pmf) => {
                if pmf.is_empty() || pmf.iter().any(|&p| p < 0.0) {
                    return Err(EvalError::InvalidPrior("empty or negative mass".into()));
                }
                if pmf.windows(2).any(|w| w[0] < w[1]) {
                    return Err(EvalError::InvalidPrior("mass must be nonincreasing".into()));
                }
                let total: f64 = pmf.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(EvalError::InvalidPrior(format!("mass sums to {total}")));
                }
            }
        }
        Ok(())
    }

    pub fn pmf(&self, t: u32) -> f64 {
        match self {
            TimePrior::Geometric { ratio } => (1.0 - ratio) * ratio.powi(t as i32),
            TimePrior::Table(pmf) => pmf.get(t as usize).copied().unwrap_or(0.0),
        }
    }

    /// Pr(T > t).
    pub fn tail_after(&self, t: u32) -> f64 {
        match self {
            TimePrior::Geometric { ratio } => ratio.powi(t as i32 + 1),
            TimePrior::Table(pmf) => pmf.iter().skip(t as usize + 1).sum(),
        }
    }
}

const ORACLE_EDGE_CAP: usize = 12;

/// Exact posterior argmax of the source on a small tree, by enumerating all
/// 2^|E| live-edge subgraphs.
///
/// For a candidate v with infection eccentricity e_v, the probability of the
/// observation is zero below t = e_v and constant for all t > e_v (every
/// frontier edge must then be dead), so the posterior reduces to
/// `P(obs | v, e_v) * pmf(e_v) + P(obs | v, e_v + 1) * Pr(T > e_v)` with both
/// terms computed by enumeration. Sources are assumed uniform. Ties within a
/// relative tolerance of 1e-9 are all returned.
pub fn map_bruteforce(
    g: &Graph,
    snapshot: &Snapshot,
    prior: &TimePrior,
) -> Result<Vec<NodeId>, EvalError> {
    prior.validate()?;
    let n = g.node_count();
    let m = g.edge_count();
    if snapshot.infected.is_empty() {
        return Err(EvalError::EmptyRecords);
    }
    if m > ORACLE_EDGE_CAP {
        return Err(EvalError::TooLarge(m, ORACLE_EDGE_CAP));
    }
    // Tree check: connected with n - 1 edges.
    let from_zero = g
        .bfs_distances(0)
        .expect("n >= 1 when infected is nonempty");
    if m + 1 != n || (0..n).any(|v| !from_zero.is_reachable(v)) {
        return Err(EvalError::NotATree);
    }
    for &v in &snapshot.infected {
        if v >= n {
            return Err(EvalError::NodeOutOfRange(v, n));
        }
    }

    let edges = g.edges();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (neighbor, edge index)
    for (i, &(u, v, _)) in edges.iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    let infected = &snapshot.infected;
    let is_infected = |v: NodeId| infected.binary_search(&v).is_ok();

    // Mask probabilities and per-candidate feasibility accumulators.
    let candidates: Vec<NodeId> = infected.clone();
    let ecc: Vec<u32> = candidates
        .iter()
        .map(|&v| {
            let d = g.bfs_distances(v).expect("range ok");
            infected
                .iter()
                .map(|&u| d.get(u).expect("tree is connected"))
                .max()
                .unwrap()
        })
        .collect();

    let mut p_at = vec![0.0f64; candidates.len()]; // P(obs | v, e_v)
    let mut p_after = vec![0.0f64; candidates.len()]; // P(obs | v, e_v + 1)

    let mut dist = vec![u32::MAX; n];
    for mask in 0u32..(1 << m) {
        let mut prob = 1.0;
        for (i, &(_, _, q)) in edges.iter().enumerate() {
            prob *= if mask & (1 << i) != 0 { q } else { 1.0 - q };
        }
        if prob == 0.0 {
            continue;
        }
        for (ci, &v) in candidates.iter().enumerate() {
            // BFS from v over live edges.
            dist.fill(u32::MAX);
            dist[v] = 0;
            let mut queue = vec![v];
            let mut head = 0;
            while head < queue.len() {
                let u = queue[head];
                head += 1;
                for &(w, ei) in &adj[u] {
                    if mask & (1 << ei) != 0 && dist[w] == u32::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push(w);
                    }
                }
            }
            for t in [ecc[ci], ecc[ci] + 1] {
                let feasible = (0..n).all(|w| {
                    if is_infected(w) {
                        dist[w] <= t
                    } else {
                        dist[w] > t // includes unreachable
                    }
                });
                if feasible {
                    if t == ecc[ci] {
                        p_at[ci] += prob;
                    } else {
                        p_after[ci] += prob;
                    }
                }
            }
        }
    }

    let posterior: Vec<f64> = (0..candidates.len())
        .map(|ci| p_at[ci] * prior.pmf(ecc[ci]) + p_after[ci] * prior.tail_after(ecc[ci]))
        .collect();
    let best = posterior.iter().copied().fold(0.0f64, f64::max);
    if best <= 0.0 {
        return Err(EvalError::InfeasibleSnapshot);
    }
    Ok(candidates
        .iter()
        .zip(&posterior)
        .filter(|&(_, &p)| p >= best * (1.0 - 1e-9))
        .map(|(&v, _)| v)
        .collect())
}

/// Observation-time threshold beyond which the whole graph is infected and
/// localization degenerates: `ceil(ln n / (ln mu + ln q)) + 2`. The log base
/// cancels in the ratio.
pub fn compute_t_u(n: usize, mu: f64, q: f64) -> Result<u32, EvalError> {
    let growth = mu * q;
    if growth <= 1.0 {
        return Err(EvalError::InvalidRegime(growth));
    }
    let ratio = (n as f64).ln() / (mu.ln() + q.ln());
    Ok(ratio.ceil() as u32 + 2)
}

/// Fraction of leaf nodes in the BFS tree of the infection subgraph rooted
/// at `source` (minimum-id parents).
pub fn leaf_fraction(gi: &InfectionSubgraph, source: NodeId) -> Result<f64, EvalError> {
    let Some(root) = gi.compact_id(source) else {
        return Err(EvalError::NodeOutOfRange(source, gi.len()));
    };
    let (_, parent) = crate::baselines::bfs_tree(gi, root);
    let mut has_child = vec![false; gi.len()];
    for p in parent.iter().flatten() {
        has_child[*p as usize] = true;
    }
    let leaves = has_child.iter().filter(|&&h| !h).count();
    Ok(leaves as f64 / gi.len() as f64)
}

/// Aggregated metrics for one group of records.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub key: String,
    pub count: usize,
    pub detection_rate: f64,
    /// Half-width of the 95% normal-approximation interval on the rate.
    pub detection_ci95: f64,
    pub mean_distance: f64,
    pub distance_ci95: f64,
    pub mean_seconds: f64,
    /// `(gamma, rate)` pairs in the order requested.
    pub gamma_accuracy: Vec<(f64, f64)>,
}

/// Group records by `key` and aggregate: detection rate and top-percent
/// accuracies with 95% normal CIs on rates, mean distance with a t-free
/// normal CI (half-width 0 for a single record).
pub fn summarize<K: Fn(&TrialRecord) -> String>(
    records: &[TrialRecord],
    key: K,
    gammas: &[f64],
) -> Result<Vec<Summary>, EvalError> {
    if records.is_empty() {
        return Err(EvalError::EmptyRecords);
    }
    let mut groups: std::collections::BTreeMap<String, Vec<&TrialRecord>> = Default::default();
    for r in records {
        groups.entry(key(r)).or_default().push(r);
    }
    let z = 1.959_963_984_540_054; // 97.5% normal quantile
    let mut out = Vec::with_capacity(groups.len());
    for (key, rs) in groups {
        let n = rs.len() as f64;
        let rate = rs.iter().filter(|r| r.hop_distance == 0).count() as f64 / n;
        let rate_ci = z * (rate * (1.0 - rate) / n).sqrt();
        let mean_d = rs.iter().map(|r| r.hop_distance as f64).sum::<f64>() / n;
        let var_d = if rs.len() > 1 {
            rs.iter()
                .map(|r| (r.hop_distance as f64 - mean_d).powi(2))
                .sum::<f64>()
                / (n - 1.0)
        } else {
            0.0
        };
        let mean_s = rs.iter().map(|r| r.seconds).sum::<f64>() / n;
        let mut gacc = Vec::with_capacity(gammas.len());
        for &g in gammas {
            if !(g > 0.0 && g <= 100.0) {
                return Err(EvalError::InvalidGamma(g));
            }
            let hits = rs
                .iter()
                .filter(|r| r.rank_of_truth <= (g / 100.0 * r.infected as f64).ceil() as usize)
                .count();
            gacc.push((g, hits as f64 / n));
        }
        out.push(Summary {
            key,
            count: rs.len(),
            detection_rate: rate,
            detection_ci95: rate_ci,
            mean_distance: mean_d,
            distance_ci95: z * (var_d / n).sqrt(),
            mean_seconds: mean_s,
            gamma_accuracy: gacc,
        });
    }
    Ok(out)
}
