//! Simple undirected graphs on dense vertex indices `0..n`.
//!
//! Every graph keeps sorted neighbour lists. Graphs with at most
//! [`DENSE_LIMIT`] vertices additionally carry one bitset row per vertex so
//! that edge tests and common-neighbourhood queries are word operations.

use std::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng;

/// Largest vertex count that gets bitset adjacency rows (64 * 8).
pub const DENSE_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),
    #[error("vertex count {0} exceeds the supported maximum")]
    TooManyVertices(usize),
}

/// How [`Graph::from_edges`] treats repeated pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuplicatePolicy {
    /// Reject a pair that occurs twice (in either orientation).
    #[default]
    Strict,
    /// Keep the first occurrence and silently drop repeats.
    Lenient,
}

/// An unordered pair stored with the smaller endpoint first.
pub type Edge = (u32, u32);

#[inline]
pub fn normalize(u: u32, v: u32) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Bitset adjacency rows, `words` u64 words per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRows {
    words: usize,
    bits: Vec<u64>,
}

impl BitRows {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitRows {
            words,
            bits: vec![0; words * n],
        }
    }

    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub fn remove(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] &= !(1 << (v % 64));
        self.bits[v * self.words + u / 64] &= !(1 << (u % 64));
    }
}

/// A simple undirected graph. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    neighbours: Vec<Vec<u32>>,
    rows: Option<BitRows>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list, validating every pair.
    pub fn from_edges<I>(n: usize, edges: I, policy: DuplicatePolicy) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > u32::MAX as usize {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            list.push(normalize(u as u32, v as u32));
        }
        list.sort_unstable();
        let before = list.len();
        if policy == DuplicatePolicy::Strict {
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(w[0].0 as usize, w[0].1 as usize));
            }
        } else {
            list.dedup();
        }
        debug_assert!(policy == DuplicatePolicy::Lenient || list.len() == before);
        Ok(Self::from_sorted_unique(n, list))
    }

    /// Builds from edges that are already normalized, sorted and unique.
    pub(crate) fn from_sorted_unique(n: usize, edges: Vec<Edge>) -> Graph {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut neighbours: Vec<Vec<u32>> = degree.iter().map(|&d| Vec::with_capacity(d)).collect();
        for &(u, v) in &edges {
            neighbours[u as usize].push(v);
            neighbours[v as usize].push(u);
        }
        for list in &mut neighbours {
            list.sort_unstable();
        }
        let rows = (n <= DENSE_LIMIT).then(|| {
            let mut rows = BitRows::new(n);
            for &(u, v) in &edges {
                rows.insert(u as usize, v as usize);
            }
            rows
        });
        Graph {
            n,
            edges,
            neighbours,
            rows,
        }
    }

    /// Builds from arbitrary normalized edges, deduplicating.
    pub(crate) fn from_normalized(n: usize, mut edges: Vec<Edge>) -> Graph {
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted_unique(n, edges)
    }

    pub fn empty(n: usize) -> Graph {
        Self::from_sorted_unique(n, Vec::new())
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((u, v));
            }
        }
        Self::from_sorted_unique(n, edges)
    }

    /// The cycle `0-1-...-(n-1)-0`; `n` must be at least 3.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let edges = (0..n).map(|i| (i as u32, ((i + 1) % n) as u32));
        Self::from_normalized(n, edges.map(|(u, v)| normalize(u, v)).collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by (min endpoint, max endpoint).
    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &[u32] {
        &self.neighbours[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.neighbours[v].len()
    }

    pub fn min_degree(&self) -> usize {
        self.neighbours.iter().map(Vec::len).min().unwrap_or(0)
    }

    #[inline]
    pub fn rows(&self) -> Option<&BitRows> {
        self.rows.as_ref()
    }

    #[inline]
    pub fn is_dense(&self) -> bool {
        self.rows.is_some()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n || u == v {
            return false;
        }
        match &self.rows {
            Some(rows) => rows.contains(u, v),
            None => self.neighbours[u].binary_search(&(v as u32)).is_ok(),
        }
    }

    /// Number of pairs `C(n, 2)`.
    #[inline]
    pub fn pair_count(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.pair_count()
    }

    pub fn isolated_count(&self) -> usize {
        self.neighbours.iter().filter(|l| l.is_empty()).count()
    }

    /// The graph with edge `(u, v)` removed.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        let e = normalize(u as u32, v as u32);
        let pos = self
            .edges
            .binary_search(&e)
            .map_err(|_| GraphError::NotAnEdge(u, v))?;
        let mut edges = self.edges.clone();
        edges.remove(pos);
        Ok(Self::from_sorted_unique(self.n, edges))
    }

    /// The graph obtained by applying `perm` (old index -> new index).
    pub fn relabel(&self, perm: &[u32]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| normalize(perm[u as usize], perm[v as usize]))
            .collect();
        Self::from_normalized(self.n, edges)
    }

    /// Subgraph induced by `set`, relabelled by rank in `set`.
    ///
    /// Returns the subgraph and the rank map (new index -> original vertex).
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<(Graph, Vec<u32>), GraphError> {
        if let Some(&v) = set.as_slice().last() {
            if v as usize >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v as usize,
                    n: self.n,
                });
            }
        }
        let mut rank = vec![u32::MAX; self.n];
        for (i, &v) in set.as_slice().iter().enumerate() {
            rank[v as usize] = i as u32;
        }
        let mut edges = Vec::new();
        for &v in set.as_slice() {
            for &w in &self.neighbours[v as usize] {
                if v < w && rank[w as usize] != u32::MAX {
                    edges.push(normalize(rank[v as usize], rank[w as usize]));
                }
            }
        }
        Ok((
            Self::from_normalized(set.len(), edges),
            set.as_slice().to_vec(),
        ))
    }

    /// True when every edge of `self` is an edge of `other` (same `n`).
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges.iter().all(|&(u, v)| other.has_edge(u as usize, v as usize))
    }
}

/// A sorted, duplicate-free set of vertex indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<u32>);

impl VertexSet {
    /// Validates `vertices` against a graph on `n` vertices.
    pub fn new<I>(n: usize, vertices: I) -> Result<VertexSet, GraphError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut v: Vec<u32> = Vec::new();
        for x in vertices {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
            v.push(x as u32);
        }
        v.sort_unstable();
        v.dedup();
        Ok(VertexSet(v))
    }

    pub(crate) fn from_sorted(v: Vec<u32>) -> VertexSet {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        VertexSet(v)
    }

    pub fn full(n: usize) -> VertexSet {
        VertexSet((0..n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }
}

/// Samples G(n, p) by geometric skipping over the pairs in row order
/// `(0,1), (0,2), (1,2), (0,3), ...` (pair `(u, v)`, `u < v`, has index
/// `v(v-1)/2 + u`).
///
/// The stream comes from [`rng::seeded`]. Each gap is
/// `floor(ln(U) / ln(1 - p))` with `U` from [`rng::unit_open_closed`], so
/// the output is a fixed function of `(n, p, seed)` on every platform.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(GraphError::InvalidProbability(p));
    }
    if n > u32::MAX as usize {
        return Err(GraphError::TooManyVertices(n));
    }
    if p == 0.0 || n < 2 {
        return Ok(Graph::empty(n));
    }
    if p == 1.0 {
        return Ok(Graph::complete(n));
    }
    let mut rng = rng::seeded(seed);
    let log_q = (-p).ln_1p();
    let total = (n as u64) * (n as u64 - 1) / 2;
    let expected = (total as f64 * p) as usize;
    let mut edges = Vec::with_capacity(expected + expected / 8 + 16);
    // Current pair is (u, v) at linear index `idx`; start one before pair 0.
    let mut v: u64 = 1;
    let mut row_start: u64 = 0;
    let mut idx: u64 = 0;
    let mut first = true;
    loop {
        let u = rng::unit_open_closed(&mut rng);
        let gap = (u.ln() / log_q).floor();
        if !gap.is_finite() || gap >= total as f64 {
            break;
        }
        let step = gap as u64 + if first { 0 } else { 1 };
        first = false;
        idx = match idx.checked_add(step) {
            Some(i) if i < total => i,
            _ => break,
        };
        while idx >= row_start + v {
            row_start += v;
            v += 1;
        }
        edges.push(((idx - row_start) as u32, v as u32));
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted_unique(n, edges))
}

/// Uniformly random permutation of `0..n` drawn from `rng`.
pub fn random_permutation<R: RngCore>(n: usize, rng: &mut R) -> Vec<u32> {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    perm
}
