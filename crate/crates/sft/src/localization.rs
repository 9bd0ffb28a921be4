//! Source localization from a single snapshot: infection subgraph,
//! eccentricities, Jordan infection centers, boundary nodes, and the
//! short-fat-tree estimator with weighted (WBND) or unweighted (BND)
//! boundary-degree tie-breaking.
//!
//! The estimator ranks all infected nodes by `(eccentricity asc, tie-break
//! score desc, node id asc)`; the head of the ranking is a Jordan infection
//! center with the maximum tie-break score.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffusion::Snapshot;
use crate::graph::{Graph, NodeId};

#[derive(Debug, Error)]
pub enum LocalizeError {
    #[error("infected set is empty")]
    EmptyInfection,
    #[error("infected nodes do not form a connected subgraph")]
    DisconnectedInfection,
    #[error("node {0} out of range for graph of {1} nodes")]
    NodeOutOfRange(NodeId, usize),
    #[error("node {0} is not infected")]
    NotInfected(NodeId),
    #[error("snapshot is for {0} nodes but graph has {1}")]
    SnapshotMismatch(usize, usize),
}

/// Localizer identifiers, also used as CSV/CLI tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    SftWbnd,
    SftBnd,
    Ecce,
    Rum,
    Netsleuth,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::SftWbnd,
        Algorithm::SftBnd,
        Algorithm::Ecce,
        Algorithm::Rum,
        Algorithm::Netsleuth,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Algorithm::SftWbnd => "sft-wbnd",
            Algorithm::SftBnd => "sft-bnd",
            Algorithm::Ecce => "ecce",
            Algorithm::Rum => "rum",
            Algorithm::Netsleuth => "netsleuth",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL.iter().find(|a| a.tag() == s).copied().ok_or_else(|| {
            format!("unknown algorithm '{s}' (expected one of sft-wbnd, sft-bnd, ecce, rum, netsleuth)")
        })
    }
}

/// Subgraph induced by the infected set, with compact ids `0..k` for fast
/// BFS kernels and a back-map to the parent graph's node ids.
pub struct InfectionSubgraph {
    /// Sorted infected node ids; compact id = position.
    nodes: Vec<NodeId>,
    /// CSR adjacency over compact ids, each neighbor list sorted.
    offsets: Vec<u32>,
    targets: Vec<u32>,
    /// Parent id -> compact id (sentinel for healthy nodes).
    compact: Vec<u32>,
}

const NOT_INFECTED: u32 = u32::MAX;

impl InfectionSubgraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Infected node ids in the parent graph, sorted ascending.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn parent_id(&self, compact: u32) -> NodeId {
        self.nodes[compact as usize]
    }

    pub fn compact_id(&self, parent: NodeId) -> Option<u32> {
        match self.compact.get(parent) {
            Some(&c) if c != NOT_INFECTED => Some(c),
            _ => None,
        }
    }

    pub fn neighbors(&self, compact: u32) -> &[u32] {
        let lo = self.offsets[compact as usize] as usize;
        let hi = self.offsets[compact as usize + 1] as usize;
        &self.targets[lo..hi]
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// BFS distances over the subgraph into a reusable buffer.
    fn bfs_into(&self, src: u32, dist: &mut [u32], queue: &mut Vec<u32>) {
        dist.fill(u32::MAX);
        queue.clear();
        dist[src as usize] = 0;
        queue.push(src);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            let d = dist[u as usize] + 1;
            for &v in self.neighbors(u) {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = d;
                    queue.push(v);
                }
            }
        }
    }
}

/// Build the subgraph of `g` induced by `infected` (sorted unique ids).
/// Errors if the set is empty or not connected, which the single-source IC
/// model rules out.
pub fn infection_subgraph(
    g: &Graph,
    infected: &[NodeId],
) -> Result<InfectionSubgraph, LocalizeError> {
    if infected.is_empty() {
        return Err(LocalizeError::EmptyInfection);
    }
    let n = g.node_count();
    let mut compact = vec![NOT_INFECTED; n];
    for (i, &v) in infected.iter().enumerate() {
        if v >= n {
            return Err(LocalizeError::NodeOutOfRange(v, n));
        }
        debug_assert!(
            i == 0 || infected[i - 1] < v,
            "infected set must be sorted unique"
        );
        compact[v] = i as u32;
    }
    let k = infected.len();
    let mut degree = vec![0u32; k];
    for (i, &v) in infected.iter().enumerate() {
        for &(w, _) in g.neighbors(v) {
            if compact[w] != NOT_INFECTED {
                degree[i] += 1;
            }
        }
    }
    let mut offsets = vec![0u32; k + 1];
    for i in 0..k {
        offsets[i + 1] = offsets[i] + degree[i];
    }
    let mut targets = vec![0u32; offsets[k] as usize];
    let mut fill: Vec<u32> = offsets[..k].to_vec();
    for (i, &v) in infected.iter().enumerate() {
        for &(w, _) in g.neighbors(v) {
            let c = compact[w];
            if c != NOT_INFECTED {
                targets[fill[i] as usize] = c;
                fill[i] += 1;
            }
        }
    }
    let gi = InfectionSubgraph {
        nodes: infected.to_vec(),
        offsets,
        targets,
        compact,
    };

    // Connectivity check by BFS from the first infected node.
    let mut dist = vec![u32::MAX; k];
    let mut queue = Vec::with_capacity(k);
    gi.bfs_into(0, &mut dist, &mut queue);
    if queue.len() != k {
        return Err(LocalizeError::DisconnectedInfection);
    }
    Ok(gi)
}

/// Infection eccentricity of every infected node: the maximum hop distance,
/// within the infection subgraph, to any other infected node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EccentricityTable {
    /// `(node, eccentricity)` sorted by node id.
    entries: Vec<(NodeId, u32)>,
}

impl EccentricityTable {
    pub fn entries(&self) -> &[(NodeId, u32)] {
        &self.entries
    }

    pub fn get(&self, v: NodeId) -> Option<u32> {
        self.entries
            .binary_search_by_key(&v, |&(node, _)| node)
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// The minimum infection eccentricity e*.
    pub fn min_eccentricity(&self) -> u32 {
        self.entries
            .iter()
            .map(|&(_, e)| e)
            .min()
            .expect("table is nonempty")
    }
}

/// Exact eccentricities by one BFS per infected node. This is the
/// centralized equivalent of the distributed id-broadcast procedure and has
/// the same O(|I| * deg(I)) cost.
pub fn eccentricities(gi: &InfectionSubgraph) -> EccentricityTable {
    let k = gi.len();
    let mut dist = vec![u32::MAX; k];
    let mut queue = Vec::with_capacity(k);
    let mut entries = Vec::with_capacity(k);
    for c in 0..k as u32 {
        gi.bfs_into(c, &mut dist, &mut queue);
        let ecc = dist.iter().copied().max().expect("nonempty");
        entries.push((gi.parent_id(c), ecc));
    }
    EccentricityTable { entries }
}

/// Nodes attaining the minimum infection eccentricity.
pub fn jordan_centers(table: &EccentricityTable) -> Vec<NodeId> {
    let e = table.min_eccentricity();
    table
        .entries
        .iter()
        .filter(|&&(_, ecc)| ecc == e)
        .map(|&(v, _)| v)
        .collect()
}

/// One furthest-away infected node together with its BFS-tree parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMember {
    pub node: NodeId,
    /// None only in the degenerate single-node infection.
    pub parent: Option<NodeId>,
}

/// The boundary of the BFS tree rooted at a candidate: infected nodes at
/// distance exactly the candidate's eccentricity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySet {
    pub eccentricity: u32,
    pub members: Vec<BoundaryMember>,
}

/// Boundary nodes of the BFS tree rooted at `v`, with each member's parent
/// chosen as its minimum-id infected neighbor one level closer to `v`.
pub fn boundary_nodes(gi: &InfectionSubgraph, v: NodeId) -> Result<BoundarySet, LocalizeError> {
    let Some(src) = gi.compact_id(v) else {
        return Err(LocalizeError::NotInfected(v));
    };
    let k = gi.len();
    let mut dist = vec![u32::MAX; k];
    let mut queue = Vec::with_capacity(k);
    gi.bfs_into(src, &mut dist, &mut queue);
    let ecc = dist.iter().copied().max().expect("nonempty");
    let mut members = Vec::new();
    for c in 0..k as u32 {
        if dist[c as usize] != ecc {
            continue;
        }
        let parent = if ecc == 0 {
            None
        } else {
            // Compact ids preserve node-id order, so the first qualifying
            // neighbor is the minimum-id one.
            let p = gi
                .neighbors(c)
                .iter()
                .copied()
                .find(|&w| dist[w as usize] == ecc - 1)
                .expect("boundary node has a parent one level up");
            Some(gi.parent_id(p))
        };
        members.push(BoundaryMember {
            node: gi.parent_id(c),
            parent,
        });
    }
    Ok(BoundarySet {
        eccentricity: ecc,
        members,
    })
}

fn wbnd_term(q: f64) -> f64 {
    // q = 1 would contribute infinity; clamp so that ordering among finite
    // competitors is preserved.
    let q = q.min(1.0 - 1e-12);
    -(1.0 - q).ln()
}

/// Weighted boundary node degree of `v`: over every boundary node `u` of the
/// BFS tree rooted at `v`, the sum of `|log(1 - q)|` over all of `u`'s edges
/// in the full graph except the one to its tree parent. Edges between two
/// boundary nodes contribute once per endpoint.
pub fn wbnd(g: &Graph, gi: &InfectionSubgraph, v: NodeId) -> Result<f64, LocalizeError> {
    let boundary = boundary_nodes(gi, v)?;
    let mut sum = 0.0;
    for m in &boundary.members {
        for &(w, q) in g.neighbors(m.node) {
            if Some(w) == m.parent {
                continue;
            }
            sum += wbnd_term(q);
        }
    }
    Ok(sum)
}

/// Unweighted variant: total full-graph degree of the boundary nodes minus
/// the boundary size (one tree-parent edge each).
pub fn bnd(g: &Graph, gi: &InfectionSubgraph, v: NodeId) -> Result<usize, LocalizeError> {
    let boundary = boundary_nodes(gi, v)?;
    let total: usize = boundary.members.iter().map(|m| g.degree(m.node)).sum();
    Ok(total.saturating_sub(boundary.members.len()))
}

/// Tie-break rule for ranking nodes of equal eccentricity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    Wbnd,
    Bnd,
}

/// Per-node localization scores, parallel to the ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeScore {
    pub node: NodeId,
    /// Infection eccentricity where the algorithm computes one.
    pub eccentricity: Option<u32>,
    /// Tie-break or ranking score, larger is better.
    pub score: f64,
}

/// Outcome of a localizer: the estimator, the full ranking of infected nodes
/// (most likely source first), and per-node scores aligned with the ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationResult {
    pub algorithm: Algorithm,
    pub estimator: NodeId,
    pub ranking: Vec<NodeId>,
    pub scores: Vec<NodeScore>,
}

impl LocalizationResult {
    pub(crate) fn from_scores(algorithm: Algorithm, mut scores: Vec<NodeScore>) -> Self {
        debug_assert!(!scores.is_empty());
        scores.sort_by(|a, b| {
            let ea = a.eccentricity.unwrap_or(0);
            let eb = b.eccentricity.unwrap_or(0);
            ea.cmp(&eb)
                .then_with(|| b.score.total_cmp(&a.score))
                .then_with(|| a.node.cmp(&b.node))
        });
        let ranking: Vec<NodeId> = scores.iter().map(|s| s.node).collect();
        LocalizationResult {
            algorithm,
            estimator: ranking[0],
            ranking,
            scores,
        }
    }

    /// 1-based position of `v` in the ranking.
    pub fn rank_of(&self, v: NodeId) -> Option<usize> {
        self.ranking.iter().position(|&u| u == v).map(|i| i + 1)
    }
}

pub(crate) fn subgraph_for_snapshot(
    g: &Graph,
    snapshot: &Snapshot,
) -> Result<InfectionSubgraph, LocalizeError> {
    if snapshot.n != g.node_count() {
        return Err(LocalizeError::SnapshotMismatch(snapshot.n, g.node_count()));
    }
    infection_subgraph(g, &snapshot.infected)
}

/// Short-fat-tree estimate: Jordan infection centers first, ties broken by
/// the boundary-degree score. Ranking covers every infected node with key
/// `(eccentricity asc, score desc, id asc)`.
pub fn sft_estimate(
    g: &Graph,
    snapshot: &Snapshot,
    mode: TieBreak,
) -> Result<LocalizationResult, LocalizeError> {
    sft_estimate_with(g, snapshot, mode, false)
}

/// As [`sft_estimate`], optionally stopping each BFS pass as soon as the
/// candidate provably exceeds the best eccentricity seen so far. With
/// `early_exit` the estimator and the Jordan-center prefix of the ranking are
/// unchanged, but eccentricities of pruned candidates are lower bounds and
/// their scores are left at zero; intended for benchmarking.
pub fn sft_estimate_with(
    g: &Graph,
    snapshot: &Snapshot,
    mode: TieBreak,
    early_exit: bool,
) -> Result<LocalizationResult, LocalizeError> {
    let gi = subgraph_for_snapshot(g, snapshot)?;
    let k = gi.len();
    let algorithm = match mode {
        TieBreak::Wbnd => Algorithm::SftWbnd,
        TieBreak::Bnd => Algorithm::SftBnd,
    };

    let mut dist = vec![u32::MAX; k];
    let mut queue: Vec<u32> = Vec::with_capacity(k);
    let mut scores = Vec::with_capacity(k);
    let mut best_ecc = u32::MAX;

    for c in 0..k as u32 {
        let ecc = if early_exit {
            match bfs_bounded(&gi, c, best_ecc, &mut dist, &mut queue) {
                Some(ecc) => ecc,
                None => {
                    // Pruned: eccentricity is at least best_ecc + 1.
                    scores.push(NodeScore {
                        node: gi.parent_id(c),
                        eccentricity: Some(best_ecc.saturating_add(1)),
                        score: 0.0,
                    });
                    continue;
                }
            }
        } else {
            gi.bfs_into(c, &mut dist, &mut queue);
            dist.iter().copied().max().expect("nonempty")
        };
        best_ecc = best_ecc.min(ecc);

        let score = match mode {
            TieBreak::Bnd => {
                let mut total = 0usize;
                let mut count = 0usize;
                for b in 0..k as u32 {
                    if dist[b as usize] == ecc {
                        total += g.degree(gi.parent_id(b));
                        count += 1;
                    }
                }
                total.saturating_sub(count) as f64
            }
            TieBreak::Wbnd => {
                let mut sum = 0.0;
                for b in 0..k as u32 {
                    if dist[b as usize] != ecc {
                        continue;
                    }
                    let parent = if ecc == 0 {
                        None
                    } else {
                        gi.neighbors(b)
                            .iter()
                            .copied()
                            .find(|&w| dist[w as usize] == ecc - 1)
                            .map(|w| gi.parent_id(w))
                    };
                    for &(w, q) in g.neighbors(gi.parent_id(b)) {
                        if Some(w) == parent {
                            continue;
                        }
                        sum += wbnd_term(q);
                    }
                }
                sum
            }
        };
        scores.push(NodeScore {
            node: gi.parent_id(c),
            eccentricity: Some(ecc),
            score,
        });
    }
    Ok(LocalizationResult::from_scores(algorithm, scores))
}

/// Level-by-level BFS that gives up once the eccentricity provably exceeds
/// `cap`. Returns the exact eccentricity if the pass completed.
fn bfs_bounded(
    gi: &InfectionSubgraph,
    src: u32,
    cap: u32,
    dist: &mut [u32],
    queue: &mut Vec<u32>,
) -> Option<u32> {
    dist.fill(u32::MAX);
    queue.clear();
    dist[src as usize] = 0;
    queue.push(src);
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let d = dist[u as usize] + 1;
        if d > cap && queue.len() < gi.len() {
            return None;
        }
        for &v in gi.neighbors(u) {
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = d;
                queue.push(v);
            }
        }
    }
    debug_assert_eq!(queue.len(), gi.len(), "infection subgraph is connected");
    Some(dist.iter().copied().max().expect("nonempty"))
}
