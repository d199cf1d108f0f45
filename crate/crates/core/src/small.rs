//! Graphs on at most 16 vertices as `u16` adjacency rows.
//!
//! This is the hot path of exhaustive enumeration: closure, irreducibility
//! and degree-2 peeling on word-sized rows with no allocation.

use crate::graph::{Edge, Graph};

pub const SMALL_MAX: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SmallGraph {
    n: u8,
    rows: [u16; SMALL_MAX],
}

/// Pair `(u, v)` with `u < v` for slot `v(v-1)/2 + u`.
pub fn pair_slots(n: usize) -> Vec<(u8, u8)> {
    let mut slots = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for v in 1..n as u8 {
        for u in 0..v {
            slots.push((u, v));
        }
    }
    slots
}

impl SmallGraph {
    pub fn empty(n: usize) -> SmallGraph {
        assert!(n <= SMALL_MAX);
        SmallGraph {
            n: n as u8,
            rows: [0; SMALL_MAX],
        }
    }

    /// Graph whose edges are the set bits of `mask` over `slots`.
    #[inline]
    pub fn from_mask(n: usize, mask: u64, slots: &[(u8, u8)]) -> SmallGraph {
        let mut g = SmallGraph::empty(n);
        let mut bits = mask;
        while bits != 0 {
            let (u, v) = slots[bits.trailing_zeros() as usize];
            bits &= bits - 1;
            g.rows[u as usize] |= 1 << v;
            g.rows[v as usize] |= 1 << u;
        }
        g
    }

    pub fn from_graph(g: &Graph) -> Option<SmallGraph> {
        if g.n() > SMALL_MAX {
            return None;
        }
        let mut s = SmallGraph::empty(g.n());
        for &(u, v) in g.edges() {
            s.add(u as usize, v as usize);
        }
        Some(s)
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_sorted_unique(self.n(), self.edges())
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut e = Vec::new();
        for u in 0..self.n() {
            let mut higher = self.rows[u] >> (u + 1);
            while higher != 0 {
                let v = u + 1 + higher.trailing_zeros() as usize;
                higher &= higher - 1;
                e.push((u as u32, v as u32));
            }
        }
        e
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn rows(&self) -> &[u16] {
        &self.rows[..self.n()]
    }

    #[inline]
    pub fn row(&self, v: usize) -> u16 {
        self.rows[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    #[inline]
    pub fn add(&mut self, u: usize, v: usize) {
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    #[inline]
    pub fn remove(&mut self, u: usize, v: usize) {
        self.rows[u] &= !(1 << v);
        self.rows[v] &= !(1 << u);
    }

    #[inline]
    pub fn degree(&self, v: usize) -> u32 {
        self.rows[v].count_ones()
    }

    pub fn m(&self) -> usize {
        self.rows().iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    #[inline]
    pub fn min_degree(&self) -> u32 {
        self.rows().iter().map(|r| r.count_ones()).min().unwrap_or(0)
    }

    pub fn degree2_count(&self) -> usize {
        self.rows().iter().filter(|r| r.count_ones() == 2).count()
    }

    #[inline]
    fn full_mask(&self) -> u16 {
        if self.n() == 16 {
            u16::MAX
        } else {
            (1u16 << self.n) - 1
        }
    }

    /// K4-bootstrap closure. For each `u` and each edge `xy` inside `N(u)`,
    /// every common neighbour of `x` and `y` becomes adjacent to `u`.
    pub fn k4_closure(&self) -> SmallGraph {
        self.closure_until(0, 0).0
    }

    /// Runs the closure, stopping early once `u ~ v` holds (if `watch` is
    /// set to `1 << v` for row `u`). Returns the graph reached and whether
    /// the watched pair was added.
    fn closure_until(&self, u_watch: usize, watch: u16) -> (SmallGraph, bool) {
        let mut g = *self;
        let n = g.n();
        let full = g.full_mask();
        let mut missing = n * n.saturating_sub(1) / 2 - g.m();
        loop {
            let mut changed = false;
            for u in 0..n {
                let nu = g.rows[u];
                let target = full & !nu & !(1 << u);
                if target == 0 {
                    continue;
                }
                let mut add = 0u16;
                let mut xs = nu;
                'scan: while xs != 0 {
                    let x = xs.trailing_zeros() as usize;
                    xs &= xs - 1;
                    let rx = g.rows[x];
                    let mut ys = nu & rx & xs;
                    while ys != 0 {
                        let y = ys.trailing_zeros() as usize;
                        ys &= ys - 1;
                        add |= rx & g.rows[y];
                        if add & target == target {
                            break 'scan;
                        }
                    }
                }
                add &= target;
                if add != 0 {
                    changed = true;
                    g.rows[u] |= add;
                    missing -= add.count_ones() as usize;
                    let mut a = add;
                    while a != 0 {
                        let v = a.trailing_zeros() as usize;
                        a &= a - 1;
                        g.rows[v] |= 1 << u;
                    }
                    if missing == 0 || g.rows[u_watch] & watch != 0 {
                        return (g, g.rows[u_watch] & watch != 0);
                    }
                }
            }
            if !changed {
                return (g, false);
            }
        }
    }

    pub fn is_complete(&self) -> bool {
        let full = self.full_mask();
        (0..self.n()).all(|v| self.rows[v] | (1 << v) == full)
    }

    #[inline]
    pub fn percolates(&self) -> bool {
        if self.n() <= 2 {
            return self.is_complete();
        }
        if self.min_degree() < 2 {
            return false;
        }
        self.k4_closure().is_complete()
    }

    /// Percolating, and no single edge can be dropped.
    pub fn is_irreducible_percolating(&self) -> bool {
        if !self.percolates() {
            return false;
        }
        let mut h = *self;
        for (u, v) in self.edges() {
            if self.degree(u as usize) == 2 || self.degree(v as usize) == 2 {
                // removal leaves a vertex of degree 1
                continue;
            }
            h.remove(u as usize, v as usize);
            // G - uv percolates iff its closure regains uv
            let (_, regained) = h.closure_until(u as usize, 1 << v);
            h.add(u as usize, v as usize);
            if regained {
                return false;
            }
        }
        true
    }

    /// Peels the smallest-indexed degree-2 vertex until the remainder has
    /// minimum degree at least 3 or only two vertices are left. Returns the
    /// surviving vertex mask and the peel order.
    pub fn peel_degree_two(&self) -> (u16, Vec<u8>) {
        let mut alive = self.full_mask();
        let mut order = Vec::new();
        loop {
            if alive.count_ones() <= 2 {
                return (alive, order);
            }
            let mut pick = None;
            let mut a = alive;
            while a != 0 {
                let v = a.trailing_zeros() as usize;
                a &= a - 1;
                if (self.rows[v] & alive).count_ones() == 2 {
                    pick = Some(v);
                    break;
                }
            }
            match pick {
                Some(v) => {
                    alive &= !(1 << v);
                    order.push(v as u8);
                }
                None => return (alive, order),
            }
        }
    }

    /// Induced subgraph on `mask`, relabelled by rank.
    pub fn induced(&self, mask: u16) -> SmallGraph {
        let verts: Vec<usize> = (0..self.n()).filter(|&v| mask >> v & 1 == 1).collect();
        let mut s = SmallGraph::empty(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    s.add(i, j);
                }
            }
        }
        s
    }

    /// 2-neighbour closure of the vertex mask `seeds`.
    pub fn two_neighbour_closure(&self, seeds: u16) -> u16 {
        let mut active = seeds;
        loop {
            let mut grew = false;
            for v in 0..self.n() {
                if active >> v & 1 == 0 && (self.rows[v] & active).count_ones() >= 2 {
                    active |= 1 << v;
                    grew = true;
                }
            }
            if !grew {
                return active;
            }
        }
    }

    /// Applies `perm` (old index -> new index).
    pub fn relabel(&self, perm: &[u8]) -> SmallGraph {
        let mut s = SmallGraph::empty(self.n());
        for (u, v) in self.edges() {
            s.add(perm[u as usize] as usize, perm[v as usize] as usize);
        }
        s
    }
}
