//! Undirected weighted simple graphs: construction, BFS, random generators,
//! and edge-list file I/O.
//!
//! Nodes are dense integer ids in `[0, n)`. Edge weights are per-edge
//! transmission probabilities in `[0, 1]`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeId, NodeId),
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("edge weight {0} outside [0, 1]")]
    WeightOutOfRange(f64),
    #[error("node {0} out of range for graph of {1} nodes")]
    NodeOutOfRange(NodeId, usize),
    #[error("invalid weight range [{0}, {1}]")]
    InvalidRange(f64, f64),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Undirected weighted simple graph. Immutable after construction; adjacency
/// lists and the edge list are kept sorted so iteration order is canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adj: Vec<Vec<(NodeId, f64)>>,
    edges: Vec<(NodeId, NodeId, f64)>,
}

impl Graph {
    /// Build a graph from an edge list. Each edge is given once as
    /// `(u, v, q)` in either orientation; edges are canonicalized to
    /// ascending `(min, max)` order.
    pub fn build(n: usize, edges: &[(NodeId, NodeId, f64)]) -> Result<Graph, GraphError> {
        let mut canon: Vec<(NodeId, NodeId, f64)> = Vec::with_capacity(edges.len());
        for &(u, v, q) in edges {
            if u >= n {
                return Err(GraphError::NodeOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::NodeOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !q.is_finite() || !(0.0..=1.0).contains(&q) {
                return Err(GraphError::WeightOutOfRange(q));
            }
            canon.push((u.min(v), u.max(v), q));
        }
        canon.sort_by_key(|&(u, v, _)| (u, v));
        for w in canon.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v, q) in &canon {
            adj[u].push((v, q));
            adj[v].push((u, q));
        }
        for list in &mut adj {
            list.sort_by_key(|&(v, _)| v);
        }
        Ok(Graph { adj, edges: canon })
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list, sorted ascending by `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[(NodeId, NodeId, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, u: NodeId) -> &[(NodeId, f64)] {
        &self.adj[u]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u].len()
    }

    /// Hop distances from `src`; unreachable nodes are marked.
    pub fn bfs_distances(&self, src: NodeId) -> Result<DistanceMap, GraphError> {
        let n = self.node_count();
        if src >= n {
            return Err(GraphError::NodeOutOfRange(src, n));
        }
        let mut dist = vec![DistanceMap::UNREACHABLE; n];
        let mut queue = Vec::with_capacity(n);
        dist[src] = 0;
        queue.push(src);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            let d = dist[u] + 1;
            for &(v, _) in &self.adj[u] {
                if dist[v] == DistanceMap::UNREACHABLE {
                    dist[v] = d;
                    queue.push(v);
                }
            }
        }
        Ok(DistanceMap { dist })
    }

    /// Erdős–Rényi G(n, p): every unordered pair wired independently with
    /// probability `p`. Weights are left at the 1.0 placeholder; use
    /// [`Graph::assign_weights`] to draw transmission probabilities.
    pub fn erdos_renyi(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
        assert!(n >= 1, "n must be at least 1");
        assert!((0.0..=1.0).contains(&p), "p must be in [0, 1]");
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random::<f64>() < p {
                    edges.push((u, v, 1.0));
                }
            }
        }
        Graph::build(n, &edges).expect("generated edges are valid")
    }

    /// Random tree grown breadth-first from a root; each expanded node draws
    /// its child count from Bi(m, beta). Growth stops once `node_budget`
    /// nodes exist (children that would exceed the budget are discarded).
    /// Weights are left at the 1.0 placeholder.
    pub fn binomial_tree(m: u32, beta: f64, node_budget: usize, rng: &mut impl Rng) -> Graph {
        assert!((0.0..=1.0).contains(&beta), "beta must be in [0, 1]");
        assert!(node_budget >= 1, "node budget must be at least 1");
        let dist = Binomial::new(m as u64, beta).expect("valid binomial parameters");
        let mut edges = Vec::new();
        let mut count = 1usize;
        let mut queue = vec![0usize];
        let mut head = 0;
        'grow: while head < queue.len() {
            let u = queue[head];
            head += 1;
            let children = dist.sample(rng);
            for _ in 0..children {
                if count == node_budget {
                    break 'grow;
                }
                let child = count;
                count += 1;
                edges.push((u, child, 1.0));
                queue.push(child);
            }
        }
        Graph::build(count, &edges).expect("tree edges are valid")
    }

    /// Replace every edge weight with an iid uniform draw from `(lo, hi)`
    /// (all weights set to `lo` when the interval is degenerate).
    pub fn assign_weights(
        &self,
        lo: f64,
        hi: f64,
        rng: &mut impl Rng,
    ) -> Result<Graph, GraphError> {
        if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi > 1.0 || lo > hi {
            return Err(GraphError::InvalidRange(lo, hi));
        }
        let edges: Vec<(NodeId, NodeId, f64)> = self
            .edges
            .iter()
            .map(|&(u, v, _)| {
                let q = if lo == hi {
                    lo
                } else {
                    rng.random_range(lo..hi)
                };
                (u, v, q)
            })
            .collect();
        Graph::build(self.node_count(), &edges)
    }
}

/// Per-node hop distances from a BFS source.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMap {
    dist: Vec<u32>,
}

impl DistanceMap {
    pub const UNREACHABLE: u32 = u32::MAX;

    pub fn get(&self, v: NodeId) -> Option<u32> {
        match self.dist[v] {
            Self::UNREACHABLE => None,
            d => Some(d),
        }
    }

    pub fn is_reachable(&self, v: NodeId) -> bool {
        self.dist[v] != Self::UNREACHABLE
    }

    /// Raw distances with `UNREACHABLE` sentinels.
    pub fn raw(&self) -> &[u32] {
        &self.dist
    }
}

/// A graph read from an edge-list file. `labels` maps dense node ids back to
/// the tokens used in the file; it is `None` when the file already used dense
/// ids `0..n`.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub labels: Option<Vec<String>>,
}

impl LoadedGraph {
    pub fn label(&self, v: NodeId) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }
}

/// Read a graph from an edge-list text file.
///
/// Lines are `u<TAB>v<TAB>q` (any whitespace accepted; `q` optional and
/// defaulting to 1.0), a single token `u` declaring an isolated node, or
/// `#`-prefixed comments. Files whose tokens are the dense integers `0..n`
/// are used as-is; anything else is remapped to dense ids (numeric tokens in
/// numeric order, otherwise lexicographic) with the original tokens kept as
/// labels.
pub fn read_edge_list(path: impl AsRef<Path>) -> Result<LoadedGraph, GraphError> {
    let text = fs::read_to_string(path)?;
    // (u, v, q, line) with token indices; isolated nodes as (u, u, _, line).
    let mut tokens: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut intern = |t: &str, tokens: &mut Vec<String>| -> usize {
        if let Some(&i) = index.get(t) {
            return i;
        }
        let i = tokens.len();
        tokens.push(t.to_string());
        index.insert(t.to_string(), i);
        i
    };
    // Isolated-node lines only register the token; edges are kept for build.
    let mut raw_edges: Vec<(usize, usize, f64)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = s.split_whitespace().collect();
        match fields.len() {
            1 => {
                intern(fields[0], &mut tokens);
            }
            2 | 3 => {
                let u = intern(fields[0], &mut tokens);
                let v = intern(fields[1], &mut tokens);
                if u == v {
                    return Err(GraphError::Parse {
                        line,
                        msg: format!("self-loop at node '{}'", fields[0]),
                    });
                }
                let q = if fields.len() == 3 {
                    fields[2].parse::<f64>().map_err(|e| GraphError::Parse {
                        line,
                        msg: format!("bad weight '{}': {e}", fields[2]),
                    })?
                } else {
                    1.0
                };
                if !q.is_finite() || !(0.0..=1.0).contains(&q) {
                    return Err(GraphError::Parse {
                        line,
                        msg: format!("weight {q} outside [0, 1]"),
                    });
                }
                raw_edges.push((u, v, q));
            }
            _ => {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("expected 1-3 fields, got {}", fields.len()),
                })
            }
        }
    }

    // Dense numeric files keep their ids; everything else is remapped.
    let numeric: Option<Vec<usize>> = tokens.iter().map(|t| t.parse::<usize>().ok()).collect();
    let (remap, labels): (Vec<usize>, Option<Vec<String>>) = match &numeric {
        Some(nums) => {
            let mut sorted = nums.clone();
            sorted.sort_unstable();
            let dense = sorted.iter().enumerate().all(|(i, &v)| i == v);
            if dense {
                (nums.clone(), None)
            } else {
                let rank: HashMap<usize, usize> =
                    sorted.iter().enumerate().map(|(i, &v)| (v, i)).collect();
                let mut labels = vec![String::new(); tokens.len()];
                let remap: Vec<usize> = nums.iter().map(|v| rank[v]).collect();
                for (tok, &id) in tokens.iter().zip(&remap) {
                    labels[id] = tok.clone();
                }
                (remap, Some(labels))
            }
        }
        None => {
            let mut sorted: Vec<&String> = tokens.iter().collect();
            sorted.sort();
            let rank: HashMap<&String, usize> =
                sorted.iter().enumerate().map(|(i, &t)| (t, i)).collect();
            let remap: Vec<usize> = tokens.iter().map(|t| rank[t]).collect();
            let mut labels = vec![String::new(); tokens.len()];
            for (tok, &id) in tokens.iter().zip(&remap) {
                labels[id] = tok.clone();
            }
            (remap, Some(labels))
        }
    };
    let n = match &numeric {
        Some(nums) if labels.is_none() => nums.iter().max().map_or(0, |&m| m + 1),
        _ => tokens.len(),
    };
    let edges: Vec<(usize, usize, f64)> = raw_edges
        .iter()
        .map(|&(u, v, q)| (remap[u], remap[v], q))
        .collect();
    let graph = Graph::build(n, &edges)?;
    Ok(LoadedGraph { graph, labels })
}

/// Write a graph as an edge-list file (dense ids, tab-separated, one line per
/// edge; isolated nodes as single-token lines so they round-trip).
pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    let mut out = String::new();
    for &(u, v, q) in g.edges() {
        writeln!(out, "{u}\t{v}\t{q}").expect("string write");
    }
    for u in 0..g.node_count() {
        if g.degree(u) == 0 {
            writeln!(out, "{u}").expect("string write");
        }
    }
    fs::write(path, out)?;
    Ok(())
}
