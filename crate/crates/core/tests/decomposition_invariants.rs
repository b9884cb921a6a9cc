//! Property-based invariants of the forest/coloring/star pipeline: the
//! edge partition is exact, forests are acyclic with unique small-label
//! parents, colorings are proper with at most six colors inside the round
//! budget, and every emitted component is a star.

use std::collections::BTreeSet;

use ctqw_core::decompose::{
    cole_vishkin_color, decompose_to_stars, forest_decompose, log_star, star_partition,
    NUM_COLORS,
};
use ctqw_core::graph::Graph;
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..48).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..96).prop_map(move |pairs| {
            let edges: BTreeSet<(usize, usize)> = pairs
                .into_iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect();
            Graph::new(n, edges).expect("deduplicated loop-free pairs form a graph")
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(192))]

    #[test]
    fn forests_partition_edges_and_respect_parent_order(g in arb_graph()) {
        let forests = forest_decompose(&g);
        prop_assert_eq!(forests.len(), g.degree_profile().max_degree);

        let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (i, forest) in forests.iter().enumerate() {
            prop_assert_eq!(forest.forest_index(), i + 1);
            let mut children_seen: BTreeSet<usize> = BTreeSet::new();
            for (parent, child) in forest.edges() {
                // Parents carry smaller labels, which forbids cycles.
                prop_assert!(parent < child);
                // At most one parent per vertex within a forest.
                prop_assert!(children_seen.insert(child));
                // Each graph edge is covered exactly once across forests.
                prop_assert!(covered.insert((parent, child)));
            }
        }
        let all_edges: BTreeSet<(usize, usize)> = g.edges().collect();
        prop_assert_eq!(covered, all_edges);
    }

    #[test]
    fn colorings_are_proper_small_and_fast(g in arb_graph()) {
        let n = g.num_vertices();
        for forest in forest_decompose(&g) {
            let coloring = cole_vishkin_color(&forest);
            prop_assert_eq!(coloring.colors.len(), n);
            prop_assert!(coloring.colors.iter().all(|&c| c < NUM_COLORS));
            for (parent, child) in forest.edges() {
                prop_assert_ne!(coloring.colors[parent], coloring.colors[child]);
            }
            prop_assert!(coloring.rounds_used <= log_star(n) + 4);
        }
    }

    #[test]
    fn star_partition_is_exact_and_disjoint(g in arb_graph()) {
        let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
        for forest in forest_decompose(&g) {
            let coloring = cole_vishkin_color(&forest);
            let classes = star_partition(&forest, &coloring).unwrap();
            prop_assert_eq!(classes.len(), NUM_COLORS);
            let mut forest_edge_count = 0usize;
            for class in &classes {
                let mut vertices_in_class: BTreeSet<usize> = BTreeSet::new();
                for star in &class.stars {
                    prop_assert!(!star.leaves.is_empty());
                    prop_assert!(!star.leaves.contains(&star.center));
                    // Star forests are vertex-disjoint unions of stars.
                    for v in star.vertices() {
                        prop_assert!(vertices_in_class.insert(v));
                    }
                    for &leaf in &star.leaves {
                        let key = (star.center.min(leaf), star.center.max(leaf));
                        prop_assert!(covered.insert(key));
                        forest_edge_count += 1;
                    }
                }
            }
            prop_assert_eq!(forest_edge_count, forest.num_edges());
        }
        let all_edges: BTreeSet<(usize, usize)> = g.edges().collect();
        prop_assert_eq!(covered, all_edges);
    }

    #[test]
    fn star_forest_list_is_nonempty_ordered_and_complete(g in arb_graph()) {
        let star_forests = decompose_to_stars(&g);
        let d = g.degree_profile().max_degree;
        prop_assert!(star_forests.len() <= NUM_COLORS * d);

        let mut last_origin = None;
        let mut total_edges = 0usize;
        for sf in &star_forests {
            prop_assert!(!sf.stars.is_empty());
            if let Some(prev) = last_origin {
                prop_assert!(sf.origin > prev, "origins must ascend");
            }
            last_origin = Some(sf.origin);
            total_edges += sf.num_edges();
        }
        prop_assert_eq!(total_edges, g.num_edges());
    }
}
