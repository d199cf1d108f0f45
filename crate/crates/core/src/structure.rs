//! Excess, irreducibility and the seed-edge / 3-core decomposition of
//! irreducible percolating graphs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bootstrap::{percolates, two_neighbour_closure};
use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("graph does not percolate")]
    NotPercolating,
    #[error("graph is not irreducible: removing edge ({0}, {1}) keeps it percolating")]
    NotIrreducible(u32, u32),
    #[error("core decomposition failed verification: {0}")]
    Verification(String),
}

/// `m - (2n - 3)`.
pub fn excess(g: &Graph) -> i64 {
    g.m() as i64 - (2 * g.n() as i64 - 3)
}

fn first_removable_edge(g: &Graph) -> Option<(u32, u32)> {
    g.edges().iter().copied().find(|&(u, v)| {
        let h = g
            .without_edge(u as usize, v as usize)
            .expect("edge taken from the edge list");
        percolates(&h)
    })
}

pub fn is_irreducible(g: &Graph) -> Result<bool, StructureError> {
    if !percolates(g) {
        return Err(StructureError::NotPercolating);
    }
    Ok(first_removable_edge(g).is_none())
}

/// Greedily deletes edges (in sorted order) while percolation survives.
/// The result is an irreducible percolating spanning subgraph.
pub fn reduce_to_irreducible(g: &Graph) -> Result<Graph, StructureError> {
    if !percolates(g) {
        return Err(StructureError::NotPercolating);
    }
    let mut h = g.clone();
    let mut i = 0;
    while i < h.m() {
        let (u, v) = h.edges()[i];
        let cand = h.without_edge(u as usize, v as usize).expect("edge present");
        if percolates(&cand) {
            h = cand;
        } else {
            i += 1;
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoreKind {
    SeedEdge,
    ThreeCore,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreDecomposition {
    pub kind: CoreKind,
    pub core: VertexSet,
    pub excess: i64,
    pub peel_order: Vec<u32>,
}

impl CoreDecomposition {
    /// Core size, with 2 standing for a seed edge.
    pub fn q(&self) -> usize {
        self.core.len()
    }

    /// Re-checks every invariant against `g`.
    pub fn verify(&self, g: &Graph) -> Result<(), StructureError> {
        let fail = |msg: String| Err(StructureError::Verification(msg));
        let core = self.core.as_slice();
        if two_neighbour_closure(g, &self.core).len() != g.n() {
            return fail(format!("core {core:?} does not 2-neighbour-span the graph"));
        }
        if self.peel_order.len() + core.len() != g.n() {
            return fail("peel order and core do not partition the vertices".into());
        }
        let (sub, _) = g
            .induced_subgraph(&self.core)
            .map_err(|e| StructureError::Verification(e.to_string()))?;
        match self.kind {
            CoreKind::SeedEdge => {
                if core.len() != 2 || !g.has_edge(core[0] as usize, core[1] as usize) {
                    return fail(format!("seed core {core:?} is not an edge"));
                }
            }
            CoreKind::ThreeCore => {
                if sub.min_degree() < 3 {
                    return fail(format!("core has a vertex of degree {}", sub.min_degree()));
                }
                if !percolates(&sub) {
                    return fail("core does not percolate".into());
                }
            }
        }
        if excess(&sub) != excess(g) || self.excess != excess(g) {
            return fail(format!(
                "core excess {} differs from graph excess {}",
                excess(&sub),
                excess(g)
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

/// Peels the smallest-indexed degree-2 vertex until the rest has minimum
/// degree at least 3 or two vertices remain. Returns the alive flags and
/// the peel order.
pub fn peel_degree_two(g: &Graph) -> (Vec<bool>, Vec<u32>) {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut twos: BTreeSet<u32> = (0..n as u32).filter(|&v| deg[v as usize] == 2).collect();
    let mut left = n;
    let mut order = Vec::new();
    while left > 2 {
        let Some(v) = twos.pop_first() else { break };
        alive[v as usize] = false;
        left -= 1;
        order.push(v);
        for &w in g.neighbours(v as usize) {
            let w = w as usize;
            if !alive[w] {
                continue;
            }
            if deg[w] == 2 {
                twos.remove(&(w as u32));
            }
            deg[w] -= 1;
            if deg[w] == 2 {
                twos.insert(w as u32);
            }
        }
    }
    (alive, order)
}

pub fn core_decomposition(g: &Graph) -> Result<CoreDecomposition, StructureError> {
    if !percolates(g) {
        return Err(StructureError::NotPercolating);
    }
    if let Some((u, v)) = first_removable_edge(g) {
        return Err(StructureError::NotIrreducible(u, v));
    }
    let (alive, peel_order) = peel_degree_two(g);
    let core: Vec<u32> = (0..g.n() as u32).filter(|&v| alive[v as usize]).collect();
    let kind = if core.len() == 2 {
        CoreKind::SeedEdge
    } else {
        CoreKind::ThreeCore
    };
    let d = CoreDecomposition {
        kind,
        core: VertexSet::from_sorted(core),
        excess: excess(g),
        peel_order,
    };
    d.verify(g)?;
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub min_degree: usize,
    pub degree2_count: usize,
    pub excess: i64,
}

pub fn graph_stats(g: &Graph) -> GraphStats {
    GraphStats {
        n: g.n(),
        m: g.m(),
        min_degree: g.min_degree(),
        degree2_count: (0..g.n()).filter(|&v| g.degree(v) == 2).count(),
        excess: excess(g),
    }
}
