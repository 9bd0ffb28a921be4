//! Time-slotted independent-cascade diffusion, the equivalent live-edge
//! sampler, and snapshot generation under a target-size window.
//!
//! IC semantics: at each slot every node activated in the previous slot
//! attempts each currently inactive neighbor once, succeeding with the edge
//! weight; successes activate at the next slot. No directed attempt is ever
//! repeated.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId};

#[derive(Debug, Error)]
pub enum DiffusionError {
    #[error("node {0} out of range for graph of {1} nodes")]
    NodeOutOfRange(NodeId, usize),
    #[error("no snapshot hit the size window [{lo}, {hi}] in {attempts} attempts")]
    WindowUnreachable {
        lo: usize,
        hi: usize,
        attempts: usize,
    },
    #[error("invalid size window [{0}, {1}]")]
    InvalidWindow(usize, usize),
    #[error("invalid snapshot: {0}")]
    InvalidSnapshot(String),
}

/// Hidden ground truth carried by simulated snapshots, used only for scoring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub source: NodeId,
    pub obs_time: u32,
    /// Slot at which each infected node became active; the source has 0.
    pub times: BTreeMap<NodeId, u32>,
}

/// A complete observation of the network: the infected set `I` at the
/// observation time. Healthy nodes are implicit as the complement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub n: usize,
    /// Sorted ascending.
    pub infected: Vec<NodeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<GroundTruth>,
}

impl Snapshot {
    pub fn infected_count(&self) -> usize {
        self.infected.len()
    }

    pub fn is_infected(&self, v: NodeId) -> bool {
        self.infected.binary_search(&v).is_ok()
    }

    /// Sort the infected set; call after deserializing untrusted files.
    pub fn normalize(&mut self) {
        self.infected.sort_unstable();
        self.infected.dedup();
    }
}

/// Check the structural invariants every IC snapshot must satisfy: the
/// infected set forms one connected component, and recorded infection times
/// are consistent hop counts from the source.
pub fn validate_snapshot(g: &Graph, snap: &Snapshot) -> Result<(), DiffusionError> {
    let fail = |msg: String| Err(DiffusionError::InvalidSnapshot(msg));
    if snap.n != g.node_count() {
        return fail(format!(
            "snapshot n={} but graph has {}",
            snap.n,
            g.node_count()
        ));
    }
    if snap.infected.is_empty() {
        return fail("empty infected set".into());
    }
    if snap.infected.windows(2).any(|w| w[0] >= w[1]) {
        return fail("infected set not sorted".into());
    }
    if *snap.infected.last().unwrap() >= g.node_count() {
        return fail("infected node out of range".into());
    }
    // Connectivity over the induced subgraph.
    let mut seen: BTreeMap<NodeId, bool> = snap.infected.iter().map(|&v| (v, false)).collect();
    let mut queue = vec![snap.infected[0]];
    *seen.get_mut(&snap.infected[0]).unwrap() = true;
    let mut reached = 1usize;
    while let Some(u) = queue.pop() {
        for &(v, _) in g.neighbors(u) {
            if let Some(flag) = seen.get_mut(&v) {
                if !*flag {
                    *flag = true;
                    reached += 1;
                    queue.push(v);
                }
            }
        }
    }
    if reached != snap.infected.len() {
        return fail("infected set is not connected".into());
    }
    if let Some(truth) = &snap.truth {
        if !snap.is_infected(truth.source) {
            return fail("source is not infected".into());
        }
        if truth.times.get(&truth.source) != Some(&0) {
            return fail("source infection time is not 0".into());
        }
        for &v in &snap.infected {
            let Some(&t) = truth.times.get(&v) else {
                return fail(format!("missing infection time for node {v}"));
            };
            if t > truth.obs_time {
                return fail(format!("node {v} infected after the observation time"));
            }
            if t > 0 {
                let ok = g
                    .neighbors(v)
                    .iter()
                    .any(|&(u, _)| truth.times.get(&u) == Some(&(t - 1)));
                if !ok {
                    return fail(format!("node {v} at time {t} has no neighbor at {}", t - 1));
                }
            }
        }
        if truth.times.len() != snap.infected.len() {
            return fail("infection times recorded for non-infected nodes".into());
        }
    }
    Ok(())
}

/// Resumable IC simulation state. Stepping consumes randomness only for the
/// attempts of the current slot, so a run can be extended round by round.
pub struct IcSimulation<'g> {
    g: &'g Graph,
    source: NodeId,
    time: Vec<u32>,
    /// Nodes activated in the last completed slot, sorted.
    frontier: Vec<NodeId>,
    round: u32,
    infected: usize,
}

const NEVER: u32 = u32::MAX;

impl<'g> IcSimulation<'g> {
    pub fn new(g: &'g Graph, source: NodeId) -> Result<Self, DiffusionError> {
        if source >= g.node_count() {
            return Err(DiffusionError::NodeOutOfRange(source, g.node_count()));
        }
        let mut time = vec![NEVER; g.node_count()];
        time[source] = 0;
        Ok(IcSimulation {
            g,
            source,
            time,
            frontier: vec![source],
            round: 0,
            infected: 1,
        })
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn infected_count(&self) -> usize {
        self.infected
    }

    /// True once no further activation is possible.
    pub fn is_exhausted(&self) -> bool {
        self.frontier.is_empty()
    }

    /// Run one time slot: every node in the frontier attempts each currently
    /// inactive neighbor once. Returns the number of new activations.
    pub fn step(&mut self, rng: &mut impl Rng) -> usize {
        let mut newly: Vec<NodeId> = Vec::new();
        for &u in &self.frontier {
            for &(v, q) in self.g.neighbors(u) {
                if self.time[v] == NEVER && rng.random::<f64>() < q {
                    newly.push(v);
                }
            }
        }
        newly.sort_unstable();
        newly.dedup();
        self.round += 1;
        for &v in &newly {
            self.time[v] = self.round;
        }
        self.infected += newly.len();
        self.frontier = newly;
        self.frontier.len()
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    /// Snapshot of the current state, observed at the current round.
    pub fn snapshot(&self) -> Snapshot {
        let mut infected = Vec::with_capacity(self.infected);
        let mut times = BTreeMap::new();
        for (v, &t) in self.time.iter().enumerate() {
            if t != NEVER {
                infected.push(v);
                times.insert(v, t);
            }
        }
        Snapshot {
            n: self.g.node_count(),
            infected,
            truth: Some(GroundTruth {
                source: self.source,
                obs_time: self.round,
                times,
            }),
        }
    }
}

/// Simulate IC from `source` for `t` slots and observe the result.
pub fn simulate_ic(
    g: &Graph,
    source: NodeId,
    t: u32,
    rng: &mut impl Rng,
) -> Result<Snapshot, DiffusionError> {
    let mut sim = IcSimulation::new(g, source)?;
    while sim.round() < t && !sim.is_exhausted() {
        sim.step(rng);
    }
    let mut snap = sim.snapshot();
    if let Some(truth) = &mut snap.truth {
        // The process may have died out early; the observation time is still t.
        truth.obs_time = t;
    }
    Ok(snap)
}

/// Outcome of flipping every edge's transmission coin up front. Equivalent to
/// IC: infection spreads deterministically over live edges, one hop per slot.
pub struct LiveEdgeGraph<'g> {
    g: &'g Graph,
    live: Vec<bool>,
}

impl<'g> LiveEdgeGraph<'g> {
    /// Mark edges live by their canonical edge index.
    pub fn from_mask(g: &'g Graph, live: Vec<bool>) -> Self {
        assert_eq!(live.len(), g.edge_count());
        LiveEdgeGraph { g, live }
    }

    pub fn live_count(&self) -> usize {
        self.live.iter().filter(|&&b| b).count()
    }

    pub fn is_live(&self, edge_index: usize) -> bool {
        self.live[edge_index]
    }
}

/// Flip each edge's coin once: live with probability equal to its weight.
pub fn sample_live_edge<'g>(g: &'g Graph, rng: &mut impl Rng) -> LiveEdgeGraph<'g> {
    let live = g
        .edges()
        .iter()
        .map(|&(_, _, q)| rng.random::<f64>() < q)
        .collect();
    LiveEdgeGraph { g, live }
}

/// Observe the infection that `le` produces from `source` after `t` slots:
/// exactly the nodes within `t` live-edge hops.
pub fn snapshot_from_live_edge(
    le: &LiveEdgeGraph,
    source: NodeId,
    t: u32,
) -> Result<Snapshot, DiffusionError> {
    let g = le.g;
    let n = g.node_count();
    if source >= n {
        return Err(DiffusionError::NodeOutOfRange(source, n));
    }
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v, _)) in g.edges().iter().enumerate() {
        if le.live[i] {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut time = vec![NEVER; n];
    time[source] = 0;
    let mut queue = vec![source];
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let d = time[u] + 1;
        if d > t {
            break;
        }
        for &v in &adj[u] {
            if time[v] == NEVER {
                time[v] = d;
                queue.push(v);
            }
        }
    }
    let mut infected = Vec::new();
    let mut times = BTreeMap::new();
    for (v, &d) in time.iter().enumerate() {
        if d != NEVER {
            infected.push(v);
            times.insert(v, d);
        }
    }
    Ok(Snapshot {
        n,
        infected,
        truth: Some(GroundTruth {
            source,
            obs_time: t,
            times,
        }),
    })
}

/// Accepted infection sizes for snapshot sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeWindow {
    pub lo: usize,
    pub hi: usize,
}

impl SizeWindow {
    /// The window `[0.75x, 1.25x]` around a target infection size.
    pub fn around(x: usize) -> SizeWindow {
        SizeWindow {
            lo: (0.75 * x as f64).ceil() as usize,
            hi: (1.25 * x as f64).floor() as usize,
        }
    }
}

/// Draw a snapshot whose infection size lands in `window`: pick a uniform
/// random source, step the simulation and stop at the first round where the
/// infected count reaches the lower bound, then accept or retry on the upper
/// bound. Runs that die out below the lower bound are retried with a fresh
/// source.
pub fn sample_snapshot_window(
    g: &Graph,
    window: SizeWindow,
    max_attempts: usize,
    rng: &mut impl Rng,
) -> Result<Snapshot, DiffusionError> {
    if window.lo < 1 || window.lo > window.hi {
        return Err(DiffusionError::InvalidWindow(window.lo, window.hi));
    }
    for _ in 0..max_attempts.max(1) {
        let source = rng.random_range(0..g.node_count());
        let mut sim = IcSimulation::new(g, source)?;
        while sim.infected_count() < window.lo && !sim.is_exhausted() {
            sim.step(rng);
        }
        let size = sim.infected_count();
        if size >= window.lo && size <= window.hi {
            return Ok(sim.snapshot());
        }
    }
    Err(DiffusionError::WindowUnreachable {
        lo: window.lo,
        hi: window.hi,
        attempts: max_attempts.max(1),
    })
}

/// Child-count and edge-weight model for trees materialized on demand.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TreeModel {
    /// Binomial trials for the per-node child count.
    pub m: u32,
    /// Binomial success probability.
    pub beta: f64,
    /// Edge transmission probabilities drawn uniformly from this range.
    pub q_lo: f64,
    pub q_hi: f64,
}

/// Windowed snapshot sampling on an unbounded random tree, materialized only
/// where the infection reaches.
///
/// A fixed pre-grown tree cannot host sizeable infections: the diffusion
/// needs several levels of room below the source, and in any budget-bounded
/// tree almost all nodes sit at the truncated bottom. Here the source is an
/// interior node of a conceptually infinite tree in which every node has
/// `Bi(m, beta)` children plus a parent: children (and the next ancestor up)
/// are drawn the moment a node becomes infected. The returned graph contains
/// every infected node's full neighborhood, so degree-based scores see the
/// same frontier a pre-existing tree would expose. Node ids are shuffled
/// before returning so the source id carries no information.
pub fn sample_tree_snapshot_window(
    model: TreeModel,
    window: SizeWindow,
    node_cap: usize,
    max_attempts: usize,
    rng: &mut impl Rng,
) -> Result<(crate::graph::Graph, Snapshot), DiffusionError> {
    if window.lo < 1 || window.lo > window.hi {
        return Err(DiffusionError::InvalidWindow(window.lo, window.hi));
    }
    for _ in 0..max_attempts.max(1) {
        if let Some(out) = lazy_tree_attempt(model, window, node_cap, rng) {
            return Ok(out);
        }
    }
    Err(DiffusionError::WindowUnreachable {
        lo: window.lo,
        hi: window.hi,
        attempts: max_attempts.max(1),
    })
}

fn lazy_tree_attempt(
    model: TreeModel,
    window: SizeWindow,
    node_cap: usize,
    rng: &mut impl Rng,
) -> Option<(crate::graph::Graph, Snapshot)> {
    use rand_distr::{Binomial, Distribution};
    let child_dist = Binomial::new(model.m as u64, model.beta).expect("valid binomial parameters");
    let draw_q = |rng: &mut dyn rand::RngCore| -> f64 {
        if model.q_lo == model.q_hi {
            model.q_lo
        } else {
            rng.random_range(model.q_lo..model.q_hi)
        }
    };

    let mut adj: Vec<Vec<(NodeId, f64)>> = vec![Vec::new()];
    let mut parent: Vec<Option<NodeId>> = vec![None];
    // Ancestors are created with one child already on the spine.
    let mut known_children: Vec<u32> = vec![0];
    let mut time: Vec<u32> = vec![0];

    let add_edge = |adj: &mut Vec<Vec<(NodeId, f64)>>, u: NodeId, v: NodeId, q: f64| {
        adj[u].push((v, q));
        adj[v].push((u, q));
    };
    // Draw the full neighborhood of a newly infected node: the next ancestor
    // if this node tops the spine, and its remaining children.
    let expand = |v: NodeId,
                  adj: &mut Vec<Vec<(NodeId, f64)>>,
                  parent: &mut Vec<Option<NodeId>>,
                  known_children: &mut Vec<u32>,
                  time: &mut Vec<u32>,
                  rng: &mut dyn rand::RngCore|
     -> bool {
        if parent[v].is_none() {
            let p = adj.len();
            adj.push(Vec::new());
            parent.push(None);
            known_children.push(1);
            time.push(NEVER);
            let q = draw_q(rng);
            add_edge(adj, v, p, q);
            parent[v] = Some(p);
        }
        let drawn = child_dist.sample(rng) as u32;
        let total = drawn.max(known_children[v]);
        for _ in 0..total - known_children[v] {
            let c = adj.len();
            adj.push(Vec::new());
            parent.push(Some(v));
            known_children.push(0);
            time.push(NEVER);
            let q = draw_q(rng);
            add_edge(adj, v, c, q);
        }
        adj.len() <= node_cap
    };

    if !expand(
        0,
        &mut adj,
        &mut parent,
        &mut known_children,
        &mut time,
        rng,
    ) {
        return None;
    }
    let mut infected: Vec<NodeId> = vec![0];
    let mut frontier: Vec<NodeId> = vec![0];
    let mut round = 0u32;
    while infected.len() < window.lo {
        if frontier.is_empty() {
            return None; // died out below the window
        }
        let mut newly: Vec<NodeId> = Vec::new();
        for &u in &frontier {
            for &(v, q) in &adj[u] {
                if time[v] == NEVER && rng.random::<f64>() < q {
                    newly.push(v);
                }
            }
        }
        newly.sort_unstable();
        newly.dedup();
        round += 1;
        for &v in &newly {
            time[v] = round;
            if !expand(
                v,
                &mut adj,
                &mut parent,
                &mut known_children,
                &mut time,
                rng,
            ) {
                return None; // materialization cap hit
            }
        }
        infected.extend_from_slice(&newly);
        frontier = newly;
    }
    if infected.len() > window.hi {
        return None;
    }

    // Shuffle ids so the source is not identifiable by position.
    let n = adj.len();
    let mut relabel: Vec<NodeId> = (0..n).collect();
    relabel.shuffle(rng);
    let mut edges = Vec::new();
    for u in 0..n {
        for &(v, q) in &adj[u] {
            if u < v {
                edges.push((relabel[u], relabel[v], q));
            }
        }
    }
    let graph = crate::graph::Graph::build(n, &edges).expect("materialized tree is valid");
    let mut infected_ids: Vec<NodeId> = infected.iter().map(|&v| relabel[v]).collect();
    infected_ids.sort_unstable();
    let times: BTreeMap<NodeId, u32> = infected.iter().map(|&v| (relabel[v], time[v])).collect();
    let snapshot = Snapshot {
        n,
        infected: infected_ids,
        truth: Some(GroundTruth {
            source: relabel[0],
            obs_time: round,
            times,
        }),
    };
    Some((graph, snapshot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::rng::substream;

    fn path5(q: f64) -> Graph {
        Graph::build(5, &[(0, 1, q), (1, 2, q), (2, 3, q), (3, 4, q)]).unwrap()
    }

    #[test]
    fn no_transmission_when_q_zero() {
        let g = path5(0.0);
        let snap = simulate_ic(&g, 2, 5, &mut substream(0, &[0])).unwrap();
        assert_eq!(snap.infected, vec![2]);
        assert_eq!(snap.truth.as_ref().unwrap().obs_time, 5);
    }

    #[test]
    fn deterministic_spread_when_q_one() {
        let g = path5(1.0);
        let snap = simulate_ic(&g, 0, 2, &mut substream(0, &[0])).unwrap();
        assert_eq!(snap.infected, vec![0, 1, 2]);
        let times = &snap.truth.as_ref().unwrap().times;
        assert_eq!(times[&0], 0);
        assert_eq!(times[&1], 1);
        assert_eq!(times[&2], 2);
        validate_snapshot(&g, &snap).unwrap();
    }

    #[test]
    fn single_edge_bernoulli_rate() {
        let g = Graph::build(2, &[(0, 1, 0.3)]).unwrap();
        let n = 100_000;
        let mut hits = 0;
        for seed in 0..n {
            let snap = simulate_ic(&g, 0, 1, &mut substream(seed, &[1])).unwrap();
            if snap.infected_count() == 2 {
                hits += 1;
            }
        }
        let rate = hits as f64 / n as f64;
        let sigma = (0.3 * 0.7 / n as f64).sqrt();
        assert!((rate - 0.3).abs() < 3.0 * sigma, "rate {rate}");
    }

    #[test]
    fn live_edge_extremes() {
        let g = path5(1.0);
        let le = sample_live_edge(&g, &mut substream(0, &[0]));
        assert_eq!(le.live_count(), 4);
        let g0 = path5(0.0);
        let le0 = sample_live_edge(&g0, &mut substream(0, &[0]));
        assert_eq!(le0.live_count(), 0);
        let snap = snapshot_from_live_edge(&le0, 3, 9).unwrap();
        assert_eq!(snap.infected, vec![3]);
    }

    #[test]
    fn live_edge_single_edge_rate() {
        let g = Graph::build(2, &[(0, 1, 0.5)]).unwrap();
        let n = 100_000;
        let live = (0..n)
            .filter(|&s| sample_live_edge(&g, &mut substream(s, &[2])).live_count() == 1)
            .count();
        let rate = live as f64 / n as f64;
        let sigma = (0.25 / n as f64).sqrt();
        assert!((rate - 0.5).abs() < 3.0 * sigma, "rate {rate}");
    }

    #[test]
    fn live_edge_reachability_is_capped() {
        // P3 with only edge (0,1) live: node 2 is never reached.
        let g = path5(1.0);
        let le = LiveEdgeGraph::from_mask(&g, vec![true, false, false, false]);
        let snap = snapshot_from_live_edge(&le, 0, 5).unwrap();
        assert_eq!(snap.infected, vec![0, 1]);

        // All live, t covers the diameter: whole component.
        let le = LiveEdgeGraph::from_mask(&g, vec![true; 4]);
        let snap = snapshot_from_live_edge(&le, 0, 4).unwrap();
        assert_eq!(snap.infected, vec![0, 1, 2, 3, 4]);

        // t limits the ball.
        let snap = snapshot_from_live_edge(&le, 0, 1).unwrap();
        assert_eq!(snap.infected, vec![0, 1]);
    }

    #[test]
    fn resumed_simulation_is_monotone() {
        let g = Graph::erdos_renyi(60, 0.08, &mut substream(3, &[0]));
        let g = g.assign_weights(0.3, 0.9, &mut substream(3, &[1])).unwrap();
        let mut rng = substream(3, &[2]);
        let mut sim = IcSimulation::new(&g, 0).unwrap();
        let mut prev = sim.snapshot().infected;
        for _ in 0..6 {
            sim.step(&mut rng);
            let cur = sim.snapshot().infected;
            assert!(prev.iter().all(|v| cur.binary_search(v).is_ok()));
            prev = cur;
        }
    }

    #[test]
    fn window_accepts_single_node() {
        let g = Graph::build(1, &[]).unwrap();
        let snap =
            sample_snapshot_window(&g, SizeWindow::around(1), 10, &mut substream(0, &[0])).unwrap();
        assert_eq!(snap.infected, vec![0]);
        assert_eq!(snap.truth.as_ref().unwrap().obs_time, 0);
    }

    #[test]
    fn window_unreachable_on_small_graph() {
        // x=10 wants at least 8 infected; a 5-node graph cannot provide them.
        let g = path5(1.0);
        let err = sample_snapshot_window(&g, SizeWindow::around(10), 20, &mut substream(0, &[0]));
        assert!(matches!(err, Err(DiffusionError::WindowUnreachable { .. })));
    }

    #[test]
    fn window_sizes_land_in_range() {
        let g = Graph::erdos_renyi(800, 0.012, &mut substream(11, &[0]));
        let g = g
            .assign_weights(0.2, 0.5, &mut substream(11, &[1]))
            .unwrap();
        let w = SizeWindow::around(120);
        assert_eq!((w.lo, w.hi), (90, 150));
        let mut rng = substream(11, &[2]);
        for _ in 0..50 {
            let snap = sample_snapshot_window(&g, w, 500, &mut rng).unwrap();
            let size = snap.infected_count();
            assert!((90..=150).contains(&size), "size {size}");
            validate_snapshot(&g, &snap).unwrap();
        }
    }

    #[test]
    fn lazy_tree_hits_window_and_validates() {
        let mut rng = substream(19, &[0]);
        for _ in 0..10 {
            let model = TreeModel {
                m: 20,
                beta: 0.5,
                q_lo: 0.2,
                q_hi: 0.5,
            };
            let (g, snap) =
                sample_tree_snapshot_window(model, SizeWindow::around(150), 200_000, 200, &mut rng)
                    .unwrap();
            assert!((113..=187).contains(&snap.infected_count()));
            validate_snapshot(&g, &snap).unwrap();
            // Every infected node's neighborhood is materialized: mean degree
            // of infected nodes is near the branching factor plus the parent.
            let mean_deg: f64 = snap
                .infected
                .iter()
                .map(|&v| g.degree(v) as f64)
                .sum::<f64>()
                / snap.infected_count() as f64;
            assert!(
                (8.0..=14.0).contains(&mean_deg),
                "mean infected degree {mean_deg}"
            );
        }
    }

    #[test]
    fn lazy_tree_is_seed_deterministic() {
        let draw = |seed| {
            sample_tree_snapshot_window(
                TreeModel {
                    m: 20,
                    beta: 0.5,
                    q_lo: 0.2,
                    q_hi: 0.5,
                },
                SizeWindow::around(100),
                100_000,
                200,
                &mut substream(seed, &[1]),
            )
            .unwrap()
        };
        let (g1, s1) = draw(5);
        let (g2, s2) = draw(5);
        assert_eq!(g1, g2);
        assert_eq!(s1, s2);
        let (_, s3) = draw(6);
        assert_ne!(s1, s3);
    }

    #[test]
    fn lazy_tree_single_node_window() {
        let (g, snap) = sample_tree_snapshot_window(
            TreeModel {
                m: 5,
                beta: 0.5,
                q_lo: 0.3,
                q_hi: 0.3,
            },
            SizeWindow::around(1),
            1000,
            10,
            &mut substream(2, &[2]),
        )
        .unwrap();
        assert_eq!(snap.infected_count(), 1);
        assert_eq!(snap.truth.as_ref().unwrap().obs_time, 0);
        // The source still has its full neighborhood drawn.
        assert!(g.degree(snap.infected[0]) >= 1);
    }

    #[test]
    fn snapshot_json_round_trip() {
        let g = path5(1.0);
        let snap = simulate_ic(&g, 1, 3, &mut substream(0, &[0])).unwrap();
        let text = serde_json::to_string_pretty(&snap).unwrap();
        let mut back: Snapshot = serde_json::from_str(&text).unwrap();
        back.normalize();
        assert_eq!(back, snap);
    }

    #[test]
    fn validate_rejects_disconnected_and_bad_times() {
        let g = path5(1.0);
        let snap = Snapshot {
            n: 5,
            infected: vec![0, 1, 3, 4],
            truth: None,
        };
        assert!(validate_snapshot(&g, &snap).is_err());

        let mut snap = simulate_ic(&g, 2, 4, &mut substream(0, &[0])).unwrap();
        snap.truth.as_mut().unwrap().times.insert(0, 9);
        assert!(validate_snapshot(&g, &snap).is_err());
    }
}
