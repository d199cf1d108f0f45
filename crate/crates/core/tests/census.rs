use std::collections::BTreeMap;

use k4perc::bootstrap::percolates;
use k4perc::enumeration::{
    canonical_code, census_level, classify, edges_for, irreducible_graphs, nine_vertex_construction,
    seven_vertex_core, three_cores,
};
use k4perc::small::{pair_slots, SmallGraph};
use k4perc::structure::{core_decomposition, excess, is_irreducible, CoreKind};
use k4perc::{DuplicatePolicy, Graph, VertexSet};

/// Labelled counts per `(i, q)` from Graph-level percolation and
/// irreducibility tests over every labelled graph with `2k - 3 + ell` edges.
fn census_by_brute_force(k: usize, ell: usize) -> BTreeMap<(usize, usize), u64> {
    let slots = pair_slots(k);
    let m = edges_for(k, ell) as u32;
    let mut out = BTreeMap::new();
    for mask in 0u64..1 << slots.len() {
        if mask.count_ones() != m {
            continue;
        }
        let edges = (0..slots.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| (slots[b].0 as usize, slots[b].1 as usize));
        let g = Graph::from_edges(k, edges, DuplicatePolicy::Strict).unwrap();
        if !percolates(&g) || !is_irreducible(&g).unwrap() {
            continue;
        }
        let d = core_decomposition(&g).unwrap();
        let i = (0..k).filter(|&v| g.degree(v) == 2).count();
        *out.entry((i, d.q())).or_insert(0) += 1;
    }
    out
}

#[test]
fn census_matches_brute_force() {
    for (k, ell_max) in [(3, 2), (4, 2), (5, 2), (6, 2), (7, 1)] {
        for ell in 0..=ell_max {
            let fast: BTreeMap<(usize, usize), u64> = census_level(k, ell)
                .unwrap()
                .iter()
                .map(|r| ((r.i, r.q), r.labelled_count))
                .collect();
            assert_eq!(fast, census_by_brute_force(k, ell), "k = {k}, ell = {ell}");
        }
    }
}

#[test]
fn unlabeled_counts_match_orbit_sums() {
    // sum over classes of k!/|Aut| equals the labelled count
    for k in 4..=6 {
        let graphs = irreducible_graphs(k, 0).unwrap();
        let mut classes: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
        for g in &graphs {
            *classes.entry(canonical_code(&g.to_graph()).unwrap()).or_insert(0) += 1;
        }
        let unlabeled: u64 = census_level(k, 0).unwrap().iter().map(|r| r.unlabeled_count).sum();
        assert_eq!(classes.len() as u64, unlabeled);
        let fact: u64 = (1..=k as u64).product();
        for (_, orbit) in classes {
            assert_eq!(fact % orbit, 0);
        }
    }
}

#[test]
fn classification_agrees_with_core_decomposition() {
    for (k, ell) in [(5, 0), (6, 0), (7, 0), (6, 1)] {
        for s in irreducible_graphs(k, ell).unwrap().iter().step_by(7) {
            let g = s.to_graph();
            let d = core_decomposition(&g).unwrap();
            assert_eq!(classify(s), (s.degree2_count(), d.q()));
            assert_eq!(d.kind == CoreKind::SeedEdge, d.q() == 2);
            assert_eq!(d.excess, ell as i64);
        }
    }
}

#[test]
fn degree_two_vertices_can_be_removed() {
    for k in 4..=7 {
        for ell in 0..=1 {
            for s in irreducible_graphs(k, ell).unwrap() {
                let g = s.to_graph();
                for v in (0..k).filter(|&v| g.degree(v) == 2) {
                    let rest = VertexSet::new(k, (0..k).filter(|&w| w != v)).unwrap();
                    let (h, _) = g.induced_subgraph(&rest).unwrap();
                    assert!(percolates(&h), "k = {k}: G - {v} does not percolate");
                }
            }
        }
    }
}

#[test]
fn no_small_three_cores() {
    for k in 3..=6 {
        for ell in 0..=3 {
            assert!(three_cores(k, ell).unwrap().is_empty(), "k = {k}, ell = {ell}");
        }
    }
}

fn automorphisms(g: &Graph) -> usize {
    let n = g.n();
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut count = 0;
    loop {
        if g.relabel(&perm) == *g {
            count += 1;
        }
        // next lexicographic permutation
        let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return count;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

#[test]
fn seven_vertex_core_shape() {
    let core = seven_vertex_core();
    assert_eq!((core.n(), core.m()), (7, 11));
    assert_eq!(core.min_degree(), 3);
    assert_eq!(is_irreducible(&core), Ok(true));
    let aut = automorphisms(&core);
    assert_eq!(aut, 8);
    assert_eq!(5040 % aut, 0);
    // labelled copies of the core
    let rec = census_level(7, 0).unwrap().into_iter().find(|r| r.q == 7).unwrap();
    assert_eq!(rec.labelled_count, 5040 / aut as u64);
    assert_eq!(rec.unlabeled_count, 1);
}

#[test]
fn pendant_on_the_seven_core_peels_once() {
    let core = seven_vertex_core();
    let (u, v) = core.edges()[0];
    let edges = core
        .edges()
        .iter()
        .map(|&(a, b)| (a as usize, b as usize))
        .chain([(u as usize, 7), (v as usize, 7)]);
    let g = Graph::from_edges(8, edges, DuplicatePolicy::Strict).unwrap();
    let d = core_decomposition(&g).unwrap();
    assert_eq!(d.kind, CoreKind::ThreeCore);
    assert_eq!(d.q(), 7);
    assert_eq!(d.peel_order, vec![7]);
    assert_eq!(d.excess, 0);
}

#[test]
fn nine_vertex_construction_gives_a_larger_core() {
    let core = seven_vertex_core();
    let mut found = 0;
    for &(u, v) in core.edges() {
        let g = nine_vertex_construction(&core, (u as usize, v as usize)).unwrap();
        assert_eq!(excess(&g), 0);
        assert!(percolates(&g));
        if g.min_degree() >= 3 && is_irreducible(&g) == Ok(true) {
            found += 1;
        }
    }
    assert!(found >= 1);
}

#[test]
fn small_graph_round_trip() {
    let core = seven_vertex_core();
    let s = SmallGraph::from_graph(&core).unwrap();
    assert!(s.is_irreducible_percolating());
    assert_eq!(s.to_graph(), core);
}
