//! The clique process: K4-closure as explicit merging of percolating
//! clusters.
//!
//! Clusters start as the edges of `G`. Two clusters sharing at least two
//! vertices are merged (pair-merge); three clusters that pairwise share
//! exactly one vertex, with the three shared vertices distinct, are merged
//! (triple-merge). At the fixpoint the closure is the edge-disjoint union of
//! the cliques on the terminal clusters.
//!
//! # Search strategy
//!
//! Each live cluster carries two lists of *pending* vertices, one for pair
//! searches and one for triple searches. The engine maintains:
//!
//! > every available merge has a member cluster holding one of its own
//! > witness vertices in the corresponding pending list.
//!
//! A scan of a cluster only looks at clusters through its pending vertices.
//! When clusters merge, the result lives in the slot of the largest input
//! `X` and inherits `pending(X)` plus every vertex not already in `X`.
//! Merges of the result that avoid those new vertices were already merges
//! of `X`, so the invariant carries over and a large cluster is never
//! rescanned in full. Pair-merges run to exhaustion before any triple-merge
//! is attempted.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rand::RngCore;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::graph::{Edge, Graph, VertexSet};
use crate::rng;

/// Order in which dirty clusters are examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "policy", content = "seed")]
pub enum Policy {
    Fifo,
    /// Uniformly random choice among queued clusters, seeded.
    Random(u64),
    /// Smallest cluster id first.
    IndexMin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MergeKind {
    Pair,
    Triple,
}

/// One step of the process.
///
/// For a pair-merge `witness` lists every shared vertex. For a triple-merge
/// of inputs `[c1, c2, c3]` it is `[x, y, z]` with `x ∈ c1 ∩ c2`,
/// `y ∈ c1 ∩ c3` and `z ∈ c2 ∩ c3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeEvent {
    pub step: usize,
    pub kind: MergeKind,
    pub inputs: Vec<u32>,
    pub input_sizes: Vec<u32>,
    pub witness: Vec<u32>,
    pub output: u32,
    pub output_size: u32,
}

/// Terminal state of a clique process.
#[derive(Debug, Clone)]
pub struct ProcessState {
    n: usize,
    /// Live clusters as `(id, vertices)`, sorted by vertex set.
    clusters: Vec<(u32, VertexSet)>,
    trace: Vec<MergeEvent>,
}

impl ProcessState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clusters(&self) -> &[(u32, VertexSet)] {
        &self.clusters
    }

    /// The terminal family as a sorted list of vertex sets.
    pub fn family(&self) -> Vec<VertexSet> {
        self.clusters.iter().map(|(_, s)| s.clone()).collect()
    }

    pub fn trace(&self) -> &[MergeEvent] {
        &self.trace
    }

    /// For each vertex, the indices (into [`clusters`](Self::clusters)) of
    /// the clusters containing it.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, (_, set)) in self.clusters.iter().enumerate() {
            for v in set.iter() {
                inc[v as usize].push(i);
            }
        }
        inc
    }

    pub fn largest_cluster(&self) -> usize {
        self.clusters.iter().map(|(_, s)| s.len()).max().unwrap_or(0)
    }

    /// True when a single cluster covers every vertex.
    pub fn spans(&self) -> bool {
        self.clusters.len() == 1 && self.clusters[0].1.len() == self.n
    }

    /// The closure: the union of cliques on the terminal clusters.
    pub fn closure(&self) -> Graph {
        let mut edges: Vec<Edge> = Vec::new();
        for (_, set) in &self.clusters {
            let s = set.as_slice();
            for (i, &u) in s.iter().enumerate() {
                for &v in &s[i + 1..] {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_normalized(self.n, edges)
    }

    /// The trace as a JSON array.
    pub fn trace_json(&self) -> String {
        serde_json::to_string_pretty(&self.trace).expect("trace serializes")
    }
}

/// Clusters above this size get a hash index for membership tests.
const INDEX_THRESHOLD: usize = 16;

#[derive(Default)]
struct Slot {
    id: u32,
    alive: bool,
    members: Vec<u32>,
    index: Option<FxHashSet<u32>>,
    pend_pair: Vec<u32>,
    pend_tri: Vec<u32>,
}

impl Slot {
    #[inline]
    fn contains(&self, v: u32) -> bool {
        match &self.index {
            Some(set) => set.contains(&v),
            None => self.members.contains(&v),
        }
    }

    fn push(&mut self, v: u32) {
        self.members.push(v);
        match &mut self.index {
            Some(set) => {
                set.insert(v);
            }
            None if self.members.len() > INDEX_THRESHOLD => {
                self.index = Some(self.members.iter().copied().collect());
            }
            None => {}
        }
    }
}

enum Queue {
    Fifo(VecDeque<u32>),
    Random(Vec<u32>, rng::Stream),
    Min(BinaryHeap<Reverse<u32>>),
}

impl Queue {
    fn new(policy: Policy, salt: u64) -> Queue {
        match policy {
            Policy::Fifo => Queue::Fifo(VecDeque::new()),
            Policy::Random(seed) => Queue::Random(Vec::new(), rng::seeded(rng::mix_seed(seed, salt, 0))),
            Policy::IndexMin => Queue::Min(BinaryHeap::new()),
        }
    }

    fn push(&mut self, id: u32) {
        match self {
            Queue::Fifo(q) => q.push_back(id),
            Queue::Random(v, _) => v.push(id),
            Queue::Min(h) => h.push(Reverse(id)),
        }
    }

    fn pop(&mut self) -> Option<u32> {
        match self {
            Queue::Fifo(q) => q.pop_front(),
            Queue::Random(v, r) => {
                if v.is_empty() {
                    None
                } else {
                    let i = (r.next_u64() % v.len() as u64) as usize;
                    Some(v.swap_remove(i))
                }
            }
            Queue::Min(h) => h.pop().map(|Reverse(id)| id),
        }
    }
}

struct Engine {
    slots: Vec<Slot>,
    slot_of: Vec<u32>,
    incidence: Vec<Vec<u32>>,
    pair_queue: Queue,
    tri_queue: Queue,
    trace: Option<Vec<MergeEvent>>,
    steps: usize,
    // scratch for triple search
    owner: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
}

type Shared = SmallVec<[u32; 4]>;

impl Engine {
    fn new(g: &Graph, policy: Policy, record: bool) -> Engine {
        let m = g.m();
        let mut slots = Vec::with_capacity(m);
        let mut incidence: Vec<Vec<u32>> = (0..g.n()).map(|v| Vec::with_capacity(g.degree(v))).collect();
        let mut tri_queue = Queue::new(policy, 2);
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            // Two edges never share two vertices. For a triangle a < b < c the
            // scan of edge ab from a finds ac and then bc, so the smaller
            // endpoint is enough to seed the triple search.
            slots.push(Slot {
                id: i as u32,
                alive: true,
                members: vec![u, v],
                index: None,
                pend_pair: Vec::new(),
                pend_tri: vec![u],
            });
            incidence[u as usize].push(i as u32);
            incidence[v as usize].push(i as u32);
            tri_queue.push(i as u32);
        }
        Engine {
            slot_of: (0..m as u32).collect(),
            slots,
            incidence,
            pair_queue: Queue::new(policy, 1),
            tri_queue,
            trace: record.then(Vec::new),
            steps: 0,
            owner: vec![0; g.n()],
            stamp: vec![0; g.n()],
            epoch: 0,
        }
    }

    /// Slot holding live cluster `id`, if it is still alive.
    #[inline]
    fn live_slot(&self, id: u32) -> Option<usize> {
        let s = self.slot_of[id as usize] as usize;
        (self.slots[s].alive && self.slots[s].id == id).then_some(s)
    }

    fn intersect(&self, a: usize, b: usize) -> Shared {
        let (small, large) = if self.slots[a].members.len() <= self.slots[b].members.len() {
            (&self.slots[a], &self.slots[b])
        } else {
            (&self.slots[b], &self.slots[a])
        };
        small.members.iter().copied().filter(|&v| large.contains(v)).collect()
    }

    /// Intersection size, stopping once it exceeds `cap`.
    fn overlap_upto(&self, a: usize, b: usize, cap: usize) -> (usize, u32) {
        let (small, large) = if self.slots[a].members.len() <= self.slots[b].members.len() {
            (&self.slots[a], &self.slots[b])
        } else {
            (&self.slots[b], &self.slots[a])
        };
        let mut count = 0;
        let mut last = u32::MAX;
        for &v in &small.members {
            if large.contains(v) {
                count += 1;
                last = v;
                if count > cap {
                    break;
                }
            }
        }
        (count, last)
    }

    fn run(&mut self) {
        loop {
            if let Some(id) = self.pair_queue.pop() {
                if let Some(s) = self.live_slot(id) {
                    self.scan_pairs(s);
                }
                continue;
            }
            if let Some(id) = self.tri_queue.pop() {
                if let Some(s) = self.live_slot(id) {
                    self.scan_triples(s);
                }
                continue;
            }
            break;
        }
    }

    fn scan_pairs(&mut self, start: usize) {
        let mut cur = start;
        let pending = std::mem::take(&mut self.slots[cur].pend_pair);
        for v in pending {
            let around = self.incidence[v as usize].clone();
            for b in around {
                let b = b as usize;
                if b == cur || !self.slots[b].alive {
                    continue;
                }
                let shared = self.intersect(cur, b);
                if shared.len() >= 2 {
                    cur = self.merge(&[cur, b], MergeKind::Pair, shared.to_vec());
                }
            }
        }
    }

    fn scan_triples(&mut self, a: usize) {
        let pending = std::mem::take(&mut self.slots[a].pend_tri);
        for (i, &v) in pending.iter().enumerate() {
            if let Some((b, g, y, z)) = self.find_triple(a, v) {
                let out = self.merge(&[a, b, g], MergeKind::Triple, vec![v, y, z]);
                // Remaining pending vertices (v included: it may sit in more
                // triangles) stay pending on the merged cluster.
                let rest = pending[i..].iter().copied();
                self.slots[out].pend_tri.extend(rest);
                return;
            }
        }
    }

    /// Looks for clusters `b ∋ v` and `g` forming a triangle with `a`, with
    /// `a ∩ b = {v}`, `a ∩ g = {y}` and `b ∩ g = {z}`.
    fn find_triple(&mut self, a: usize, v: u32) -> Option<(usize, usize, u32, u32)> {
        let around: Vec<usize> = self.incidence[v as usize]
            .iter()
            .map(|&s| s as usize)
            .filter(|&s| s != a)
            .collect();
        if around.is_empty() {
            return None;
        }
        let spread: usize = around.iter().map(|&b| self.slots[b].members.len() - 1).sum();
        if self.slots[a].members.len() <= spread {
            // Mark the far vertices of every b through v, then walk the
            // clusters around the rest of a.
            self.epoch = self.epoch.wrapping_add(1);
            if self.epoch == 0 {
                self.stamp.iter_mut().for_each(|s| *s = 0);
                self.epoch = 1;
            }
            let mut marked: Vec<u32> = Vec::with_capacity(spread);
            for &b in &around {
                for &z in &self.slots[b].members {
                    if z != v {
                        self.owner[z as usize] = b as u32;
                        self.stamp[z as usize] = self.epoch;
                        marked.push(z);
                    }
                }
            }
            for &y in &self.slots[a].members {
                if y == v {
                    continue;
                }
                for &g in &self.incidence[y as usize] {
                    let g = g as usize;
                    if g == a {
                        continue;
                    }
                    let gs = &self.slots[g];
                    let hit = if gs.members.len() <= marked.len() {
                        gs.members
                            .iter()
                            .copied()
                            .find(|&z| self.stamp[z as usize] == self.epoch && self.owner[z as usize] as usize != g)
                    } else {
                        marked
                            .iter()
                            .copied()
                            .find(|&z| self.owner[z as usize] as usize != g && gs.contains(z))
                    };
                    if let Some(z) = hit {
                        let b = self.owner[z as usize] as usize;
                        debug_assert_eq!(self.overlap_upto(a, b, 1).0, 1);
                        debug_assert_eq!(self.overlap_upto(a, g, 1).0, 1);
                        debug_assert_eq!(self.overlap_upto(b, g, 1).0, 1);
                        return Some((b, g, y, z));
                    }
                }
            }
            None
        } else {
            for &b in &around {
                for &z in &self.slots[b].members {
                    if z == v {
                        continue;
                    }
                    for &g in &self.incidence[z as usize] {
                        let g = g as usize;
                        if g == b || g == a {
                            continue;
                        }
                        let (count, y) = self.overlap_upto(a, g, 1);
                        if count == 1 {
                            debug_assert_ne!(y, v);
                            return Some((b, g, y, z));
                        }
                    }
                }
            }
            None
        }
    }

    /// Merges the given slots; returns the slot of the result.
    fn merge(&mut self, inputs: &[usize], kind: MergeKind, witness: Vec<u32>) -> usize {
        let x = *inputs
            .iter()
            .max_by_key(|&&s| (self.slots[s].members.len(), Reverse(self.slots[s].id)))
            .expect("at least two inputs");
        let input_ids: Vec<u32> = inputs.iter().map(|&s| self.slots[s].id).collect();
        let input_sizes: Vec<u32> = inputs.iter().map(|&s| self.slots[s].members.len() as u32).collect();
        let mut fresh: Vec<u32> = Vec::new();
        for &d in inputs {
            if d == x {
                continue;
            }
            let members = std::mem::take(&mut self.slots[d].members);
            self.slots[d].alive = false;
            self.slots[d].index = None;
            self.slots[d].pend_pair = Vec::new();
            self.slots[d].pend_tri = Vec::new();
            for z in members {
                let inc = &mut self.incidence[z as usize];
                if let Some(pos) = inc.iter().position(|&s| s as usize == d) {
                    inc.swap_remove(pos);
                }
                if !self.slots[x].contains(z) {
                    self.slots[x].push(z);
                    self.incidence[z as usize].push(x as u32);
                    fresh.push(z);
                }
            }
        }
        let id = self.slot_of.len() as u32;
        self.slot_of.push(x as u32);
        let slot = &mut self.slots[x];
        slot.id = id;
        slot.pend_pair.extend_from_slice(&fresh);
        slot.pend_tri.extend_from_slice(&fresh);
        let output_size = slot.members.len() as u32;
        if !slot.pend_pair.is_empty() {
            self.pair_queue.push(id);
        }
        if !slot.pend_tri.is_empty() {
            self.tri_queue.push(id);
        }
        if let Some(trace) = &mut self.trace {
            trace.push(MergeEvent {
                step: self.steps,
                kind,
                inputs: input_ids,
                input_sizes,
                witness,
                output: id,
                output_size,
            });
        }
        self.steps += 1;
        x
    }

    fn finish(self, n: usize) -> ProcessState {
        let mut clusters: Vec<(u32, VertexSet)> = self
            .slots
            .into_iter()
            .filter(|s| s.alive)
            .map(|s| {
                let mut m = s.members;
                m.sort_unstable();
                (s.id, VertexSet::from_sorted(m))
            })
            .collect();
        clusters.sort_by(|a, b| a.1.cmp(&b.1));
        ProcessState {
            n,
            clusters,
            trace: self.trace.unwrap_or_default(),
        }
    }
}

/// Runs the clique process to its terminal state, recording the trace.
pub fn run_clique_process(g: &Graph, policy: Policy) -> ProcessState {
    run_with(g, policy, true)
}

/// Runs the clique process; `record_trace = false` skips the event log.
pub fn run_with(g: &Graph, policy: Policy, record_trace: bool) -> ProcessState {
    let mut engine = Engine::new(g, policy, record_trace);
    engine.run();
    engine.finish(g.n())
}

/// `<G>_{K4}` via the clique process.
pub fn k4_closure_fast(g: &Graph) -> Graph {
    run_with(g, Policy::Fifo, false).closure()
}

/// Size of the largest terminal cluster (0 for an edgeless graph).
pub fn largest_percolating_clique(g: &Graph) -> usize {
    run_with(g, Policy::Fifo, false).largest_cluster()
}

/// Whether the terminal family admits no further merge. Quadratic/cubic in
/// the number of clusters; meant for verification.
pub fn is_terminal(family: &[VertexSet]) -> bool {
    let shared = |a: &VertexSet, b: &VertexSet| -> Vec<u32> { a.iter().filter(|&v| b.contains(v)).collect() };
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            let ij = shared(&family[i], &family[j]);
            if ij.len() >= 2 {
                return false;
            }
            if ij.len() != 1 {
                continue;
            }
            for k in j + 1..family.len() {
                let ik = shared(&family[i], &family[k]);
                let jk = shared(&family[j], &family[k]);
                if ik.len() == 1 && jk.len() == 1 && ij[0] != ik[0] && ij[0] != jk[0] && ik[0] != jk[0] {
                    return false;
                }
            }
        }
    }
    true
}
