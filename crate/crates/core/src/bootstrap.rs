//! Reference implementations of K4-bootstrap closure and 2-neighbour
//! bootstrap. These are the oracles the clique-process engine is checked
//! against, so they favour directness over speed.

use std::collections::VecDeque;

use rustc_hash::FxHashSet;

use crate::graph::{normalize, BitRows, Edge, Graph, GraphError, VertexSet};

/// Growing adjacency used while computing a closure.
enum Adjacency {
    Dense(BitRows),
    Sparse(Vec<FxHashSet<u32>>),
}

struct Closure {
    adj: Adjacency,
    lists: Vec<Vec<u32>>,
    added: Vec<Edge>,
}

impl Closure {
    fn new(g: &Graph) -> Closure {
        let adj = match g.rows() {
            Some(rows) => Adjacency::Dense(rows.clone()),
            None => Adjacency::Sparse(
                (0..g.n())
                    .map(|v| g.neighbours(v).iter().copied().collect())
                    .collect(),
            ),
        };
        Closure {
            adj,
            lists: (0..g.n()).map(|v| g.neighbours(v).to_vec()).collect(),
            added: Vec::new(),
        }
    }

    #[inline]
    fn has(&self, u: u32, v: u32) -> bool {
        match &self.adj {
            Adjacency::Dense(rows) => rows.contains(u as usize, v as usize),
            Adjacency::Sparse(sets) => sets[u as usize].contains(&v),
        }
    }

    fn add(&mut self, u: u32, v: u32) {
        match &mut self.adj {
            Adjacency::Dense(rows) => rows.insert(u as usize, v as usize),
            Adjacency::Sparse(sets) => {
                sets[u as usize].insert(v);
                sets[v as usize].insert(u);
            }
        }
        self.lists[u as usize].push(v);
        self.lists[v as usize].push(u);
        self.added.push(normalize(u, v));
    }

    fn common(&self, u: u32, v: u32) -> Vec<u32> {
        let (a, b) = if self.lists[u as usize].len() <= self.lists[v as usize].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.lists[a as usize]
            .iter()
            .copied()
            .filter(|&w| self.has(b, w))
            .collect()
    }

    /// Non-adjacent pairs inside `N(u) ∩ N(v)`.
    fn open_pairs_in_common(&self, u: u32, v: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        match &self.adj {
            Adjacency::Dense(rows) => {
                let common: Vec<u64> = rows
                    .row(u as usize)
                    .iter()
                    .zip(rows.row(v as usize))
                    .map(|(a, b)| a & b)
                    .collect();
                for (wi, &word) in common.iter().enumerate() {
                    let mut bits = word;
                    while bits != 0 {
                        let a = wi * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        let ra = rows.row(a);
                        // only partners above a
                        for (wj, (&c, &r)) in common.iter().zip(ra).enumerate().skip(wi) {
                            let mut open = c & !r;
                            if wj == wi {
                                open &= !(u64::MAX >> (63 - a % 64));
                            }
                            while open != 0 {
                                let b = wj * 64 + open.trailing_zeros() as usize;
                                open &= open - 1;
                                out.push((a as u32, b as u32));
                            }
                        }
                    }
                }
            }
            Adjacency::Sparse(_) => {
                let common = self.common(u, v);
                for (i, &a) in common.iter().enumerate() {
                    for &b in &common[i + 1..] {
                        if !self.has(a, b) {
                            out.push((a, b));
                        }
                    }
                }
            }
        }
        out
    }

    /// True when `N(u) ∩ N(v)` spans at least one edge.
    fn completes_k4(&self, u: u32, v: u32) -> bool {
        match &self.adj {
            Adjacency::Dense(rows) => {
                let ru = rows.row(u as usize);
                let rv = rows.row(v as usize);
                let common: Vec<u64> = ru.iter().zip(rv).map(|(a, b)| a & b).collect();
                for (wi, &word) in common.iter().enumerate() {
                    let mut bits = word;
                    while bits != 0 {
                        let x = wi * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        if rows.row(x).iter().zip(&common).any(|(r, c)| r & c != 0) {
                            return true;
                        }
                    }
                }
                false
            }
            Adjacency::Sparse(_) => {
                let common = self.common(u, v);
                common
                    .iter()
                    .enumerate()
                    .any(|(i, &x)| common[i + 1..].iter().any(|&y| self.has(x, y)))
            }
        }
    }
}

/// FIFO of candidate pairs holding each pair at most once.
struct Queue {
    order: VecDeque<Edge>,
    queued: Queued,
}

enum Queued {
    Matrix { n: usize, bits: Vec<bool> },
    Set(FxHashSet<Edge>),
}

impl Queue {
    fn new(n: usize) -> Queue {
        let queued = if n <= crate::graph::DENSE_LIMIT {
            Queued::Matrix {
                n,
                bits: vec![false; n * n],
            }
        } else {
            Queued::Set(FxHashSet::default())
        };
        Queue {
            order: VecDeque::new(),
            queued,
        }
    }

    fn flip(&mut self, e: Edge, on: bool) -> bool {
        match &mut self.queued {
            Queued::Matrix { n, bits } => {
                let slot = &mut bits[e.0 as usize * *n + e.1 as usize];
                let changed = *slot != on;
                *slot = on;
                changed
            }
            Queued::Set(set) if on => set.insert(e),
            Queued::Set(set) => set.remove(&e),
        }
    }

    fn push(&mut self, a: u32, b: u32) {
        let e = normalize(a, b);
        if self.flip(e, true) {
            self.order.push_back(e);
        }
    }

    fn pop(&mut self) -> Option<Edge> {
        let e = self.order.pop_front()?;
        self.flip(e, false);
        Some(e)
    }
}

/// The K4-bootstrap closure `<G>_{K4}`.
///
/// Repeatedly adds `uv` whenever `N(u) ∩ N(v)` contains an edge. Candidate
/// pairs start as all pairs at distance two; inserting `uv` re-queues the
/// pairs whose common neighbourhood just gained a vertex (`(u, w)` for
/// `w ∈ N(v)` and `(v, w)` for `w ∈ N(u)`) and the non-adjacent pairs inside
/// `N(u) ∩ N(v)`, whose common neighbourhood just gained the edge `uv`.
pub fn k4_closure_naive(g: &Graph) -> Graph {
    let mut c = Closure::new(g);
    let mut queue = Queue::new(g.n());
    for w in 0..g.n() {
        let nb = g.neighbours(w);
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if !c.has(a, b) {
                    queue.push(a, b);
                }
            }
        }
    }
    while let Some((u, v)) = queue.pop() {
        if c.has(u, v) || !c.completes_k4(u, v) {
            continue;
        }
        c.add(u, v);
        for &w in &c.lists[v as usize] {
            if w != u && !c.has(u, w) {
                queue.push(u, w);
            }
        }
        for &w in &c.lists[u as usize] {
            if w != v && !c.has(v, w) {
                queue.push(v, w);
            }
        }
        for (a, b) in c.open_pairs_in_common(u, v) {
            queue.push(a, b);
        }
    }
    if c.added.is_empty() {
        return g.clone();
    }
    let mut edges = g.edges().to_vec();
    edges.extend_from_slice(&c.added);
    Graph::from_normalized(g.n(), edges)
}

/// Whether `<G>_{K4}` is the complete graph on `V(G)`.
///
/// `K0`, `K1` and `K2` percolate; any graph on at most two vertices that is
/// missing a pair does not.
pub fn percolates(g: &Graph) -> bool {
    if g.is_complete() {
        return true;
    }
    if g.min_degree() < 2 {
        // A vertex of degree 0 or 1 never gains an edge.
        return false;
    }
    k4_closure_naive(g).is_complete()
}

/// `<A, G>_2`: the vertices eventually active when every vertex with at
/// least two active neighbours activates.
pub fn two_neighbour_closure(g: &Graph, seeds: &VertexSet) -> VertexSet {
    let mut scratch = TwoNeighbour::new(g.n());
    let mut out = scratch.run(g, seeds.as_slice()).to_vec();
    out.sort_unstable();
    VertexSet::from_sorted(out)
}

/// Reusable buffers for repeated 2-neighbour closures on one graph.
pub(crate) struct TwoNeighbour {
    hits: Vec<u8>,
    active: Vec<bool>,
    order: Vec<u32>,
    touched: Vec<u32>,
}

impl TwoNeighbour {
    pub(crate) fn new(n: usize) -> Self {
        TwoNeighbour {
            hits: vec![0; n],
            active: vec![false; n],
            order: Vec::new(),
            touched: Vec::new(),
        }
    }

    /// Runs the closure and returns the active vertices in activation order.
    pub(crate) fn run(&mut self, g: &Graph, seeds: &[u32]) -> &[u32] {
        for &v in &self.order {
            self.active[v as usize] = false;
        }
        for &v in &self.touched {
            self.hits[v as usize] = 0;
        }
        self.order.clear();
        self.touched.clear();
        for &s in seeds {
            if !self.active[s as usize] {
                self.active[s as usize] = true;
                self.order.push(s);
            }
        }
        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head];
            head += 1;
            for &w in g.neighbours(v as usize) {
                let wi = w as usize;
                if self.active[wi] {
                    continue;
                }
                if self.hits[wi] == 0 {
                    self.touched.push(w);
                }
                self.hits[wi] += 1;
                if self.hits[wi] == 2 {
                    self.active[wi] = true;
                    self.order.push(w);
                }
            }
        }
        &self.order
    }
}

/// Whether `{a, b}` is a contagious pair: `<{a, b}, G>_2 = V(G)`.
pub fn is_contagious(g: &Graph, a: usize, b: usize) -> Result<bool, GraphError> {
    let seeds = VertexSet::new(g.n(), [a, b])?;
    Ok(two_neighbour_closure(g, &seeds).len() == g.n())
}

/// Whether the edge `(u, v)` is a seed edge of `G`.
pub fn is_seed_edge(g: &Graph, u: usize, v: usize) -> Result<bool, GraphError> {
    if !g.has_edge(u, v) {
        return Err(GraphError::NotAnEdge(u, v));
    }
    is_contagious(g, u, v)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::DuplicatePolicy;

    pub(crate) fn g(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, e.iter().copied(), DuplicatePolicy::Strict).unwrap()
    }

    fn k4_minus() -> Graph {
        g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    }

    fn bowtie() -> Graph {
        g(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
    }

    /// Full-pass fixpoint straight from the definition.
    fn closure_by_passes(g: &Graph) -> Graph {
        let n = g.n();
        let mut adj = vec![vec![false; n]; n];
        for &(u, v) in g.edges() {
            adj[u as usize][v as usize] = true;
            adj[v as usize][u as usize] = true;
        }
        loop {
            let mut changed = false;
            for u in 0..n {
                for v in u + 1..n {
                    if adj[u][v] {
                        continue;
                    }
                    let common: Vec<usize> = (0..n).filter(|&w| adj[u][w] && adj[v][w]).collect();
                    if common.iter().any(|&x| common.iter().any(|&y| adj[x][y])) {
                        adj[u][v] = true;
                        adj[v][u] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| adj[u][v]);
        Graph::from_edges(n, edges.collect::<Vec<_>>(), DuplicatePolicy::Strict).unwrap()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(k4_closure_naive(&k4_minus()), Graph::complete(4));
        assert_eq!(k4_closure_naive(&bowtie()), bowtie());
        assert_eq!(k4_closure_naive(&Graph::cycle(5)), Graph::cycle(5));
    }

    #[test]
    fn percolation_examples() {
        assert!(percolates(&k4_minus()));
        assert!(!percolates(&Graph::cycle(5)));
        assert!(percolates(&Graph::empty(0)));
        assert!(percolates(&Graph::empty(1)));
        assert!(percolates(&Graph::complete(2)));
        assert!(!percolates(&Graph::empty(2)));
        assert!(!percolates(&bowtie()));
    }

    #[test]
    fn queue_closure_matches_full_passes() {
        let mut rng = crate::rng::seeded(11);
        for trial in 0..300 {
            let n = 3 + trial % 10;
            let p = 0.15 + 0.5 * crate::rng::unit(&mut rng);
            let gr = crate::graph::sample_gnp(n, p, trial as u64).unwrap();
            assert_eq!(k4_closure_naive(&gr), closure_by_passes(&gr), "{gr:?}");
        }
    }

    #[test]
    fn queue_closure_across_word_boundaries() {
        for (seed, n) in [(1u64, 64usize), (2, 65), (3, 130), (4, 200)] {
            let gr = crate::graph::sample_gnp(n, 0.08, seed).unwrap();
            assert_eq!(k4_closure_naive(&gr), closure_by_passes(&gr));
        }
    }

    #[test]
    fn sparse_path_matches_dense_path() {
        // Same graph embedded in a vertex set above the dense limit.
        for seed in 0..20 {
            let small = crate::graph::sample_gnp(40, 0.2, seed).unwrap();
            let big = Graph::from_sorted_unique(600, small.edges().to_vec());
            assert!(!big.is_dense());
            let a = k4_closure_naive(&small);
            let b = k4_closure_naive(&big);
            assert_eq!(a.edges(), b.edges());
        }
    }

    #[test]
    fn two_neighbour_examples() {
        let t = g(3, &[(0, 1), (1, 2), (0, 2)]);
        let s = VertexSet::new(3, [0, 1]).unwrap();
        assert_eq!(two_neighbour_closure(&t, &s), VertexSet::full(3));

        let e = Graph::empty(5);
        let a = VertexSet::new(5, [1, 3]).unwrap();
        assert_eq!(two_neighbour_closure(&e, &a), a);

        let c5 = Graph::cycle(5);
        let pair = VertexSet::new(5, [2, 3]).unwrap();
        assert_eq!(two_neighbour_closure(&c5, &pair), pair);
    }

    #[test]
    fn seed_edge_examples() {
        // K4 minus (2,3): vertices 0 and 1 are adjacent to everything.
        let gm = k4_minus();
        assert!(is_seed_edge(&gm, 0, 2).unwrap());
        assert!(is_seed_edge(&gm, 0, 1).unwrap());
        let t = g(3, &[(0, 1), (1, 2), (0, 2)]);
        for &(u, v) in t.edges() {
            assert!(is_seed_edge(&t, u as usize, v as usize).unwrap());
        }
        let c5 = Graph::cycle(5);
        for &(u, v) in c5.edges() {
            assert!(!is_seed_edge(&c5, u as usize, v as usize).unwrap());
        }
        assert_eq!(is_seed_edge(&gm, 2, 3), Err(GraphError::NotAnEdge(2, 3)));
        // Non-adjacent contagious pair.
        assert!(is_contagious(&gm, 2, 3).unwrap());
    }
}
