//! Shared helpers for integration tests.
#![allow(dead_code)] // each test binary uses a different subset

use std::sync::{Mutex, MutexGuard, PoisonError};

use rand::Rng;
use sft::graph::{Graph, NodeId};

static SERIAL: Mutex<()> = Mutex::new(());

/// CPU-heavy tests take this so their wall-clock measurements do not include
/// each other's load.
pub fn serial_guard() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(PoisonError::into_inner)
}

/// Uniform random recursive tree: node v attaches to a uniform earlier node.
pub fn random_tree(n: usize, q_lo: f64, q_hi: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let p = rng.random_range(0..v);
        let q = if q_lo == q_hi {
            q_lo
        } else {
            rng.random_range(q_lo..q_hi)
        };
        edges.push((p, v, q));
    }
    Graph::build(n, &edges).expect("tree edges are valid")
}

/// Random connected graph: a random tree plus `extra` random non-duplicate
/// edges, all with weight `q`.
pub fn random_connected_graph(n: usize, extra: usize, q: f64, rng: &mut impl Rng) -> Graph {
    let mut edges: Vec<(NodeId, NodeId, f64)> = Vec::new();
    let mut present = std::collections::HashSet::new();
    for v in 1..n {
        let p = rng.random_range(0..v);
        edges.push((p, v, q));
        present.insert((p.min(v), p.max(v)));
    }
    let mut added = 0;
    let mut guard = 0;
    while added < extra && guard < 20 * (extra + 1) {
        guard += 1;
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if present.insert(key) {
            edges.push((key.0, key.1, q));
            added += 1;
        }
    }
    Graph::build(n, &edges).expect("edges are valid")
}

/// All-pairs hop distances by Floyd-Warshall; `u32::MAX / 4` marks
/// disconnected pairs.
pub const FW_INF: u32 = u32::MAX / 4;

#[allow(clippy::needless_range_loop)]
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.node_count();
    let mut d = vec![vec![FW_INF; n]; n];
    for v in 0..n {
        d[v][v] = 0;
    }
    for &(u, v, _) in g.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k].saturating_add(d[k][j]);
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Least-squares fit y = a + b x, returning (slope, r_squared).
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let ss_res: f64 = points
        .iter()
        .map(|p| {
            let pred = my + slope * (p.0 - mx);
            (p.1 - pred).powi(2)
        })
        .sum();
    (slope, 1.0 - ss_res / syy)
}
