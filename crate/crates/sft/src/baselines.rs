//! Reference localizers used for comparison: minimum eccentricity with
//! random tie-breaking (ECCE), rumor centrality (RUM), and a Laplacian
//! eigenvector ranker (NETSLEUTH).

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::diffusion::Snapshot;
use crate::graph::{Graph, NodeId};
use crate::localization::{
    eccentricities, subgraph_for_snapshot, Algorithm, InfectionSubgraph, LocalizationResult,
    LocalizeError, NodeScore,
};

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error(transparent)]
    Localize(#[from] LocalizeError),
    #[error("power iteration did not converge within {0} iterations")]
    PowerIterationDiverged(usize),
}

/// Minimum infection eccentricity with ties broken uniformly at random from
/// the provided stream. The ranking shuffles within each eccentricity tier,
/// so the estimator is uniform over the Jordan infection centers.
pub fn ecce_estimate(
    g: &Graph,
    snapshot: &Snapshot,
    rng: &mut impl Rng,
) -> Result<LocalizationResult, BaselineError> {
    let gi = subgraph_for_snapshot(g, snapshot)?;
    let table = eccentricities(&gi);
    let mut entries: Vec<(NodeId, u32)> = table.entries().to_vec();
    entries.sort_by_key(|&(_, e)| e);
    let mut scores: Vec<NodeScore> = Vec::with_capacity(entries.len());
    let mut i = 0;
    while i < entries.len() {
        let mut j = i;
        while j < entries.len() && entries[j].1 == entries[i].1 {
            j += 1;
        }
        let mut tier: Vec<(NodeId, u32)> = entries[i..j].to_vec();
        tier.shuffle(rng);
        for (node, ecc) in tier {
            scores.push(NodeScore {
                node,
                eccentricity: Some(ecc),
                score: -(ecc as f64),
            });
        }
        i = j;
    }
    let ranking: Vec<NodeId> = scores.iter().map(|s| s.node).collect();
    Ok(LocalizationResult {
        algorithm: Algorithm::Ecce,
        estimator: ranking[0],
        ranking,
        scores,
    })
}

/// BFS tree of the infection subgraph rooted at `root` (compact ids), with
/// each node's parent chosen as its minimum-id neighbor one level closer to
/// the root. Returns `(discovery order, parent per node)`.
pub(crate) fn bfs_tree(gi: &InfectionSubgraph, root: u32) -> (Vec<u32>, Vec<Option<u32>>) {
    let k = gi.len();
    let mut dist = vec![u32::MAX; k];
    let mut order = Vec::with_capacity(k);
    dist[root as usize] = 0;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        let d = dist[u as usize] + 1;
        for &v in gi.neighbors(u) {
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = d;
                order.push(v);
            }
        }
    }
    let mut parent = vec![None; k];
    for &v in &order {
        let d = dist[v as usize];
        if d == 0 {
            continue;
        }
        // Neighbor lists are sorted by compact id, which preserves node-id
        // order, so the first match is the minimum-id parent.
        parent[v as usize] = gi
            .neighbors(v)
            .iter()
            .copied()
            .find(|&w| dist[w as usize] == d - 1);
    }
    (order, parent)
}

/// Log rumor centrality of `v`: on the min-id-parent BFS tree rooted at `v`,
/// `log R(v) = log(k!) - sum over nodes of log(subtree size)`. Exact when the
/// infection subgraph is a tree; a BFS-tree heuristic otherwise. Log domain
/// because k! overflows around k = 170.
pub fn rumor_centrality(gi: &InfectionSubgraph, v: NodeId) -> Result<f64, BaselineError> {
    let Some(root) = gi.compact_id(v) else {
        return Err(LocalizeError::NotInfected(v).into());
    };
    Ok(log_rumor_centrality(gi, root))
}

fn log_rumor_centrality(gi: &InfectionSubgraph, root: u32) -> f64 {
    let k = gi.len();
    let (order, parent) = bfs_tree(gi, root);
    let mut subtree = vec![1u64; k];
    for &v in order.iter().rev() {
        if let Some(p) = parent[v as usize] {
            subtree[p as usize] += subtree[v as usize];
        }
    }
    let mut log_r = 0.0;
    for i in 2..=k as u64 {
        log_r += (i as f64).ln();
    }
    for &s in &subtree {
        log_r -= (s as f64).ln();
    }
    log_r
}

/// Rank infected nodes by rumor centrality, recomputing a fresh BFS tree per
/// candidate root.
pub fn rum_estimate(g: &Graph, snapshot: &Snapshot) -> Result<LocalizationResult, BaselineError> {
    let gi = subgraph_for_snapshot(g, snapshot)?;
    let mut scores: Vec<NodeScore> = (0..gi.len() as u32)
        .map(|c| NodeScore {
            node: gi.parent_id(c),
            eccentricity: None,
            score: log_rumor_centrality(&gi, c),
        })
        .collect();
    scores.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.node.cmp(&b.node))
    });
    let ranking: Vec<NodeId> = scores.iter().map(|s| s.node).collect();
    Ok(LocalizationResult {
        algorithm: Algorithm::Rum,
        estimator: ranking[0],
        ranking,
        scores,
    })
}

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 10_000;

/// Rank infected nodes by their entry in the eigenvector of the largest
/// eigenvalue of the infection subgraph's Laplacian `L = D - A` (degrees
/// counted within the subgraph). The eigenvector comes from shifted power
/// iteration started at the first basis vector; its sign is fixed so the
/// largest-magnitude entry is positive.
pub fn netsleuth_estimate(
    g: &Graph,
    snapshot: &Snapshot,
) -> Result<LocalizationResult, BaselineError> {
    let gi = subgraph_for_snapshot(g, snapshot)?;
    let k = gi.len();
    if k == 1 {
        let node = gi.parent_id(0);
        return Ok(LocalizationResult {
            algorithm: Algorithm::Netsleuth,
            estimator: node,
            ranking: vec![node],
            scores: vec![NodeScore {
                node,
                eccentricity: None,
                score: 0.0,
            }],
        });
    }
    let x = laplacian_dominant_eigenvector(&gi)?;
    let mut scores: Vec<NodeScore> = (0..k as u32)
        .map(|c| NodeScore {
            node: gi.parent_id(c),
            eccentricity: None,
            score: x[c as usize],
        })
        .collect();
    scores.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.node.cmp(&b.node))
    });
    let ranking: Vec<NodeId> = scores.iter().map(|s| s.node).collect();
    Ok(LocalizationResult {
        algorithm: Algorithm::Netsleuth,
        estimator: ranking[0],
        ranking,
        scores,
    })
}

fn laplacian_apply(gi: &InfectionSubgraph, x: &[f64], y: &mut [f64]) {
    for c in 0..gi.len() as u32 {
        let i = c as usize;
        let neighbors = gi.neighbors(c);
        let mut acc = neighbors.len() as f64 * x[i];
        for &w in neighbors {
            acc -= x[w as usize];
        }
        y[i] = acc;
    }
}

/// Dominant eigenvector of the subgraph Laplacian by power iteration on
/// `L + I`; the shift keeps every eigenvalue positive without reordering
/// them, so the iterates cannot oscillate in sign.
fn laplacian_dominant_eigenvector(gi: &InfectionSubgraph) -> Result<Vec<f64>, BaselineError> {
    let k = gi.len();
    let mut x = vec![0.0; k];
    x[0] = 1.0;
    let mut lx = vec![0.0; k];
    for _ in 0..POWER_MAX_ITERS {
        laplacian_apply(gi, &x, &mut lx);
        let mut y: Vec<f64> = lx.iter().zip(&x).map(|(&l, &v)| l + v).collect();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(BaselineError::PowerIterationDiverged(POWER_MAX_ITERS));
        }
        for v in &mut y {
            *v /= norm;
        }
        let delta = y
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = y;
        if delta < POWER_TOL {
            fix_sign(&mut x);
            return Ok(x);
        }
    }
    Err(BaselineError::PowerIterationDiverged(POWER_MAX_ITERS))
}

fn fix_sign(x: &mut [f64]) {
    let mut arg = 0;
    for (i, v) in x.iter().enumerate() {
        if v.abs() > x[arg].abs() {
            arg = i;
        }
    }
    if x[arg] < 0.0 {
        for v in x.iter_mut() {
            *v = -*v;
        }
    }
}
