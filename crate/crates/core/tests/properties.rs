use k4perc::bootstrap::{k4_closure_naive, percolates};
use k4perc::clique_process::{is_terminal, k4_closure_fast, run_clique_process, MergeKind, Policy};
use k4perc::graph::random_permutation;
use k4perc::rng::seeded;
use k4perc::structure::{excess, reduce_to_irreducible};
use k4perc::{sample_gnp, DuplicatePolicy, Graph};
use proptest::prelude::*;

fn gnp() -> impl Strategy<Value = Graph> {
    (1usize..48, 0.0f64..0.7, any::<u64>()).prop_map(|(n, p, seed)| sample_gnp(n, p, seed).unwrap())
}

fn drop_edges(g: &Graph, keep: &[bool]) -> Graph {
    let edges = g
        .edges()
        .iter()
        .zip(keep.iter().cycle())
        .filter(|(_, &k)| k)
        .map(|(&(u, v), _)| (u as usize, v as usize));
    Graph::from_edges(g.n(), edges, DuplicatePolicy::Strict).unwrap()
}

/// A percolating graph on `n` vertices built from `seed`.
fn percolating(n: usize, seed: u64) -> Graph {
    let mut s = seed;
    loop {
        let g = sample_gnp(n, 0.6, s).unwrap();
        if percolates(&g) {
            return reduce_to_irreducible(&g).unwrap();
        }
        s = s.wrapping_add(0x9e37_79b9);
    }
}

/// Union of `parts` after a seeded relabelling of each, where `(local, global)`
/// identifies a vertex of the relabelled part with an earlier global vertex.
/// `None` when two parts share an edge.
fn glue(parts: &[(Graph, Vec<(usize, usize)>)], seed: u64) -> Option<Graph> {
    let mut rng = seeded(seed);
    let mut next = 0usize;
    let mut edges = Vec::new();
    for (g, glue_to) in parts {
        let h = g.relabel(&random_permutation(g.n(), &mut rng));
        let mut id = vec![usize::MAX; h.n()];
        for &(local, global) in glue_to {
            id[local] = global;
        }
        for slot in id.iter_mut().filter(|s| **s == usize::MAX) {
            *slot = next;
            next += 1;
        }
        edges.extend(h.edges().iter().map(|&(u, v)| (id[u as usize], id[v as usize])));
    }
    Graph::from_edges(next, edges, DuplicatePolicy::Strict).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn fast_closure_matches_naive(g in gnp()) {
        prop_assert_eq!(k4_closure_fast(&g), k4_closure_naive(&g));
    }

    #[test]
    fn closure_is_idempotent_and_extensive(g in gnp()) {
        let c = k4_closure_fast(&g);
        prop_assert!(g.is_subgraph_of(&c));
        prop_assert_eq!(k4_closure_fast(&c), c);
    }

    #[test]
    fn closure_is_monotone(g in gnp(), keep in prop::collection::vec(any::<bool>(), 1..16)) {
        let h = drop_edges(&g, &keep);
        prop_assert!(k4_closure_fast(&h).is_subgraph_of(&k4_closure_fast(&g)));
        if percolates(&h) {
            prop_assert!(percolates(&g));
        }
    }

    #[test]
    fn closure_commutes_with_relabelling(g in gnp(), seed in any::<u64>()) {
        let perm = random_permutation(g.n(), &mut seeded(seed));
        prop_assert_eq!(k4_closure_fast(&g.relabel(&perm)), k4_closure_fast(&g).relabel(&perm));
    }

    #[test]
    fn terminal_family_is_confluent(g in gnp(), seed in any::<u64>()) {
        let base = run_clique_process(&g, Policy::Fifo).family();
        prop_assert!(is_terminal(&base));
        for policy in [Policy::IndexMin, Policy::Random(seed), Policy::Random(seed ^ 1)] {
            prop_assert_eq!(&run_clique_process(&g, policy).family(), &base);
        }
        // clusters pairwise share at most one vertex
        for (i, a) in base.iter().enumerate() {
            for b in &base[i + 1..] {
                prop_assert!(a.iter().filter(|&v| b.contains(v)).count() <= 1);
            }
        }
    }

    #[test]
    fn merge_steps_at_most_triple_the_largest_cluster(g in gnp(), seed in any::<u64>()) {
        let st = run_clique_process(&g, Policy::Random(seed));
        let mut largest = if g.m() > 0 { 2 } else { 0 };
        for ev in st.trace() {
            let arity = match ev.kind {
                MergeKind::Pair => 2,
                MergeKind::Triple => 3,
            };
            prop_assert_eq!(ev.inputs.len(), arity);
            prop_assert!(ev.output_size <= ev.input_sizes.iter().sum::<u32>());
            prop_assert!(ev.output_size <= 3 * largest);
            largest = largest.max(ev.output_size);
        }
    }

    #[test]
    fn percolating_graphs_have_nonnegative_excess(g in gnp()) {
        if g.n() >= 2 && percolates(&g) {
            prop_assert!(excess(&g) >= 0);
        }
    }

    #[test]
    fn pair_merge_adds_two_m_minus_three(
        n1 in 3usize..8, n2 in 3usize..8, m in 2usize..4, s1 in any::<u64>(), s2 in any::<u64>()
    ) {
        let (a, b) = (percolating(n1, s1), percolating(n2, s2));
        let shared: Vec<(usize, usize)> = (0..m).map(|j| (j, j)).collect();
        let u = glue(&[(a.clone(), vec![]), (b.clone(), shared)], s1 ^ s2);
        prop_assume!(u.is_some());
        let u = u.unwrap();
        prop_assert_eq!(u.m(), a.m() + b.m());
        prop_assert!(percolates(&u));
        prop_assert_eq!(excess(&u), excess(&a) + excess(&b) + (2 * m as i64 - 3));
    }

    #[test]
    fn triangle_merge_is_additive(
        sizes in (2usize..7, 2usize..7, 2usize..7), seeds in any::<(u64, u64, u64)>()
    ) {
        let (a, b, c) = (
            percolating(sizes.0, seeds.0),
            percolating(sizes.1, seeds.1),
            percolating(sizes.2, seeds.2),
        );
        // vertex 0 of a meets b, vertex 1 of a meets c, and b meets c elsewhere
        let u = glue(
            &[(a.clone(), vec![]), (b.clone(), vec![(0, 0)]), (c.clone(), vec![(0, 1), (1, sizes.0)])],
            seeds.0 ^ seeds.1 ^ seeds.2,
        );
        prop_assume!(u.is_some());
        let u = u.unwrap();
        prop_assert_eq!(u.n(), sizes.0 + sizes.1 + sizes.2 - 3);
        prop_assert!(percolates(&u));
        prop_assert_eq!(excess(&u), excess(&a) + excess(&b) + excess(&c));
    }
}
