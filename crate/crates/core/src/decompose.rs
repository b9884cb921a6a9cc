//! Decomposition of a bounded-degree graph into star forests.
//!
//! The pipeline has three deterministic stages:
//!
//! 1. [`forest_decompose`] splits the edge set into at most `d` rooted
//!    forests (`d` = max degree). Each vertex ranks its incident edges by
//!    ascending neighbor label; edge `{u, v}` with `u < v` goes to the forest
//!    numbered by `v`'s rank of that edge and is oriented `u -> v`. Every
//!    vertex therefore has at most one parent per forest, and a parent's
//!    label is always smaller than its child's, which rules out cycles.
//! 2. [`cole_vishkin_color`] colors each forest properly with at most six
//!    colors using the deterministic coin-flipping scheme: starting from
//!    `color[v] = v`, every round each vertex locates the lowest bit where
//!    its color differs from its parent's previous color and recolors to
//!    `2k + bit`. The bit length contracts roughly logarithmically per round,
//!    so the loop finishes after about `log* N` rounds.
//! 3. [`star_partition`] buckets the forest edges by the color of the child
//!    endpoint. Within one bucket, edges sharing a parent form a star whose
//!    center is that parent; properness guarantees no vertex is both a
//!    center and a leaf in the same bucket.
//!
//! [`decompose_to_stars`] chains the stages and returns the nonempty star
//! forests in a fixed order (forest index, then color class).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::Graph;

/// Number of color classes the coin-flipping coloring lands in.
pub const NUM_COLORS: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("forest {forest}: parent {parent} of vertex {child} must carry a smaller label")]
    ParentOrder { forest: usize, parent: usize, child: usize },
    #[error("forest {forest}: vertex {v} out of range (forest has {n} vertices)")]
    VertexOutOfRange { forest: usize, v: usize, n: usize },
    #[error(
        "improper coloring: edge {parent} -> {child} has color {color} on both endpoints \
         (caller bug)"
    )]
    ImproperColoring { parent: usize, child: usize, color: usize },
    #[error("star has no leaves")]
    EmptyStar,
    #[error("star center {center} listed among its leaves")]
    CenterIsLeaf { center: usize },
}

/// A forest of rooted trees over vertices `0..num_vertices`, stored as a
/// partial parent map. Roots and isolated vertices have no parent. Parents
/// always carry smaller labels than their children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedForest {
    num_vertices: usize,
    parent: Vec<Option<usize>>,
    forest_index: usize,
}

impl RootedForest {
    /// Validates the parent-label ordering that keeps the forest acyclic.
    pub fn new(
        parent: Vec<Option<usize>>,
        forest_index: usize,
    ) -> Result<RootedForest, DecomposeError> {
        let n = parent.len();
        for (child, &p) in parent.iter().enumerate() {
            if let Some(p) = p {
                if p >= n {
                    return Err(DecomposeError::VertexOutOfRange {
                        forest: forest_index,
                        v: p,
                        n,
                    });
                }
                if p >= child {
                    return Err(DecomposeError::ParentOrder {
                        forest: forest_index,
                        parent: p,
                        child,
                    });
                }
            }
        }
        Ok(RootedForest { num_vertices: n, parent, forest_index })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// 1-based index of this forest within its decomposition.
    pub fn forest_index(&self) -> usize {
        self.forest_index
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent.get(v).copied().flatten()
    }

    /// Directed edges `(parent, child)` in ascending child order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(child, &p)| p.map(|parent| (parent, child)))
    }

    pub fn num_edges(&self) -> usize {
        self.parent.iter().flatten().count()
    }
}

/// Result of the coin-flipping coloring: one color in `0..6` per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperColoring {
    pub colors: Vec<usize>,
    pub rounds_used: usize,
}

/// A star: one center joined to each leaf. Leaves never contain the center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Star {
    pub center: usize,
    pub leaves: BTreeSet<usize>,
}

impl Star {
    pub fn new(
        center: usize,
        leaves: impl IntoIterator<Item = usize>,
    ) -> Result<Star, DecomposeError> {
        let leaves: BTreeSet<usize> = leaves.into_iter().collect();
        if leaves.is_empty() {
            return Err(DecomposeError::EmptyStar);
        }
        if leaves.contains(&center) {
            return Err(DecomposeError::CenterIsLeaf { center });
        }
        Ok(Star { center, leaves })
    }

    pub fn num_leaves(&self) -> usize {
        self.leaves.len()
    }

    /// All vertices of the star: center plus leaves.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.center).chain(self.leaves.iter().copied())
    }
}

/// A set of vertex-disjoint stars, tagged with the (forest index, color
/// class) pair it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarForest {
    pub stars: Vec<Star>,
    pub origin: (usize, usize),
}

impl StarForest {
    pub fn num_edges(&self) -> usize {
        self.stars.iter().map(Star::num_leaves).sum()
    }
}

/// Splits the graph into `max_degree` rooted forests covering every edge
/// exactly once. Returns an empty list for an edgeless graph.
pub fn forest_decompose(g: &Graph) -> Vec<RootedForest> {
    let n = g.num_vertices();
    let d = g.degree_profile().max_degree;
    let adj = g.adjacency_lists();

    let mut parents: Vec<Vec<Option<usize>>> = vec![vec![None; n]; d];
    for (u, v) in g.edges() {
        // Rank of u within v's ascending neighbor list, 1-based. v is the
        // larger endpoint, so it owns the edge's forest assignment.
        let rank = adj[v].binary_search(&u).expect("edge endpoint missing from adjacency") + 1;
        parents[rank - 1][v] = Some(u);
    }

    parents
        .into_iter()
        .enumerate()
        .map(|(i, parent)| {
            RootedForest::new(parent, i + 1).expect("ranked orientation yields parent < child")
        })
        .collect()
}

/// Colors a rooted forest properly with at most [`NUM_COLORS`] colors.
///
/// Synchronous rounds read the previous round's colors. A non-root vertex
/// takes `k` = lowest bit index where its color differs from its parent's
/// and recolors to `2k + bit_k(color)`; roots (and isolated vertices) use
/// `k = 0`. Rounds repeat while colors need more than three bits; one final
/// round then lands every color in `0..6`.
pub fn cole_vishkin_color(forest: &RootedForest) -> ProperColoring {
    let n = forest.num_vertices();
    let mut colors: Vec<usize> = (0..n).collect();
    let mut rounds_used = 0;

    loop {
        let wide = colors.iter().any(|&c| bit_length(c) > 3);
        let prev = colors.clone();
        for v in 0..n {
            let (k, bit) = match forest.parent(v) {
                Some(p) => {
                    let diff = prev[v] ^ prev[p];
                    debug_assert_ne!(diff, 0, "proper coloring must separate parent and child");
                    let k = diff.trailing_zeros() as usize;
                    (k, (prev[v] >> k) & 1)
                }
                None => (0, prev[v] & 1),
            };
            colors[v] = 2 * k + bit;
        }
        rounds_used += 1;
        if !wide {
            break;
        }
    }

    debug_assert!(colors.iter().all(|&c| c < NUM_COLORS));
    ProperColoring { colors, rounds_used }
}

/// Buckets forest edges into [`NUM_COLORS`] star forests by child color.
///
/// Fails if the supplied coloring assigns the same color to both endpoints
/// of any forest edge — that signals a bug in the caller, not bad input.
pub fn star_partition(
    forest: &RootedForest,
    coloring: &ProperColoring,
) -> Result<Vec<StarForest>, DecomposeError> {
    let mut classes: Vec<BTreeMap<usize, BTreeSet<usize>>> =
        vec![BTreeMap::new(); NUM_COLORS];
    for (parent, child) in forest.edges() {
        let k = coloring.colors[child];
        if coloring.colors[parent] == k {
            return Err(DecomposeError::ImproperColoring { parent, child, color: k });
        }
        classes[k].entry(parent).or_default().insert(child);
    }

    Ok(classes
        .into_iter()
        .enumerate()
        .map(|(k, centers)| StarForest {
            stars: centers
                .into_iter()
                .map(|(center, leaves)| Star { center, leaves })
                .collect(),
            origin: (forest.forest_index(), k),
        })
        .collect())
}

/// Full decomposition: forests, coloring, star partition. Returns only the
/// nonempty star forests, ordered by (forest index, color class).
pub fn decompose_to_stars(g: &Graph) -> Vec<StarForest> {
    forest_decompose(g)
        .iter()
        .flat_map(|forest| {
            let coloring = cole_vishkin_color(forest);
            star_partition(forest, &coloring)
                .expect("cole_vishkin_color returns a proper coloring")
        })
        .filter(|sf| !sf.stars.is_empty())
        .collect()
}

/// Bits needed to write `x` in binary; 0 still occupies one bit.
fn bit_length(x: usize) -> usize {
    (usize::BITS - x.leading_zeros()).max(1) as usize
}

/// Iterated logarithm: how many times `log2` must be applied to drop `n`
/// to at most 1.
pub fn log_star(n: usize) -> usize {
    let mut x = n as f64;
    let mut count = 0;
    while x > 1.0 {
        x = x.log2();
        count += 1;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forest_edge_set(f: &RootedForest) -> BTreeSet<(usize, usize)> {
        f.edges().collect()
    }

    #[test]
    fn triangle_splits_into_two_forests() {
        let g = Graph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let forests = forest_decompose(&g);
        assert_eq!(forests.len(), 2);
        assert_eq!(forest_edge_set(&forests[0]), BTreeSet::from([(0, 1), (0, 2)]));
        assert_eq!(forest_edge_set(&forests[1]), BTreeSet::from([(1, 2)]));
        assert_eq!(forests[0].forest_index(), 1);
        assert_eq!(forests[1].forest_index(), 2);
    }

    #[test]
    fn path_fills_first_forest_only() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let forests = forest_decompose(&g);
        assert_eq!(forests.len(), 2);
        assert_eq!(forest_edge_set(&forests[0]), BTreeSet::from([(0, 1), (1, 2)]));
        assert_eq!(forests[1].num_edges(), 0);
    }

    #[test]
    fn star_graph_spreads_edges_by_rank() {
        // K_{1,3} centered at the highest label 3.
        let g = Graph::new(4, [(0, 3), (1, 3), (2, 3)]).unwrap();
        let forests = forest_decompose(&g);
        assert_eq!(forests.len(), 3);
        assert_eq!(forest_edge_set(&forests[0]), BTreeSet::from([(0, 3)]));
        assert_eq!(forest_edge_set(&forests[1]), BTreeSet::from([(1, 3)]));
        assert_eq!(forest_edge_set(&forests[2]), BTreeSet::from([(2, 3)]));
    }

    #[test]
    fn edgeless_graph_decomposes_to_nothing() {
        let g = Graph::new(5, []).unwrap();
        assert!(forest_decompose(&g).is_empty());
        assert!(decompose_to_stars(&g).is_empty());
    }

    #[test]
    fn rooted_forest_rejects_backwards_parent() {
        let err = RootedForest::new(vec![Some(1), None], 1).unwrap_err();
        assert_eq!(err, DecomposeError::ParentOrder { forest: 1, parent: 1, child: 0 });
    }

    #[test]
    fn coloring_single_vertex() {
        let f = RootedForest::new(vec![None], 1).unwrap();
        let c = cole_vishkin_color(&f);
        assert_eq!(c.colors, vec![0]);
        assert_eq!(c.rounds_used, 1);
    }

    #[test]
    fn coloring_root_with_one_child() {
        let f = RootedForest::new(vec![None, Some(0)], 1).unwrap();
        let c = cole_vishkin_color(&f);
        assert_eq!(c.colors, vec![0, 1]);
    }

    #[test]
    fn coloring_chain_of_three() {
        let f = RootedForest::new(vec![None, Some(0), Some(1)], 1).unwrap();
        let c = cole_vishkin_color(&f);
        assert_eq!(c.colors, vec![0, 1, 0]);
        assert_eq!(c.rounds_used, 1);
    }

    #[test]
    fn coloring_is_proper_on_long_paths() {
        for n in [10usize, 100, 1000] {
            let parent = (0..n).map(|v| v.checked_sub(1)).collect();
            let f = RootedForest::new(parent, 1).unwrap();
            let c = cole_vishkin_color(&f);
            for (p, v) in f.edges() {
                assert_ne!(c.colors[p], c.colors[v], "edge {p}->{v} monochromatic at n={n}");
            }
            assert!(c.colors.iter().all(|&x| x < NUM_COLORS));
        }
    }

    #[test]
    fn coloring_round_bound_at_a_million_vertices() {
        // Path on 2^20 vertices: the worst case for color contraction.
        let n = 1 << 20;
        let parent = (0..n).map(|v: usize| v.checked_sub(1)).collect();
        let f = RootedForest::new(parent, 1).unwrap();
        let c = cole_vishkin_color(&f);
        for (p, v) in f.edges() {
            assert_ne!(c.colors[p], c.colors[v]);
        }
        assert!(
            c.rounds_used <= log_star(n) + 4,
            "rounds {} exceeds log*({n}) + 4 = {}",
            c.rounds_used,
            log_star(n) + 4
        );
    }

    #[test]
    fn star_partition_groups_by_parent() {
        let forest = RootedForest::new(vec![None, Some(0), Some(0)], 1).unwrap();
        let coloring = ProperColoring { colors: vec![0, 1, 1], rounds_used: 0 };
        let classes = star_partition(&forest, &coloring).unwrap();
        assert_eq!(classes.len(), NUM_COLORS);
        assert_eq!(classes[1].stars, vec![Star::new(0, [1, 2]).unwrap()]);
        assert!(classes[0].stars.is_empty());
        assert_eq!(classes[1].origin, (1, 1));
    }

    #[test]
    fn star_partition_rejects_improper_coloring() {
        let forest = RootedForest::new(vec![None, Some(0)], 1).unwrap();
        let coloring = ProperColoring { colors: vec![2, 2], rounds_used: 0 };
        let err = star_partition(&forest, &coloring).unwrap_err();
        assert_eq!(err, DecomposeError::ImproperColoring { parent: 0, child: 1, color: 2 });
    }

    #[test]
    fn single_edge_yields_single_star() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let sfs = decompose_to_stars(&g);
        assert_eq!(sfs.len(), 1);
        assert_eq!(sfs[0].stars, vec![Star::new(0, [1]).unwrap()]);
    }

    #[test]
    fn triangle_stars_cover_all_edges_once() {
        let g = Graph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let sfs = decompose_to_stars(&g);
        let total: usize = sfs.iter().map(StarForest::num_edges).sum();
        assert_eq!(total, 3);

        let mut seen = BTreeSet::new();
        for sf in &sfs {
            for star in &sf.stars {
                for &leaf in &star.leaves {
                    let e = (star.center.min(leaf), star.center.max(leaf));
                    assert!(seen.insert(e), "edge {e:?} appears twice");
                    assert!(g.has_edge(e.0, e.1));
                }
            }
        }
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn star_forests_are_vertex_disjoint_within_class() {
        let g = Graph::new(8, [(0, 1), (0, 2), (1, 3), (2, 5), (4, 5), (5, 6), (6, 7), (3, 7)])
            .unwrap();
        for sf in decompose_to_stars(&g) {
            let mut seen = BTreeSet::new();
            for star in &sf.stars {
                for v in star.vertices() {
                    assert!(seen.insert(v), "vertex {v} shared between stars in {:?}", sf.origin);
                }
            }
        }
    }

    #[test]
    fn star_forest_count_is_bounded_by_six_d() {
        let g = Graph::new(6, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 4), (3, 5)]).unwrap();
        let d = g.degree_profile().max_degree;
        let sfs = decompose_to_stars(&g);
        assert!(sfs.len() <= NUM_COLORS * d);
        // Deterministic ordering by (forest, color).
        let origins: Vec<_> = sfs.iter().map(|sf| sf.origin).collect();
        let mut sorted = origins.clone();
        sorted.sort_unstable();
        assert_eq!(origins, sorted);
    }

    #[test]
    fn log_star_small_values() {
        assert_eq!(log_star(1), 0);
        assert_eq!(log_star(2), 1);
        assert_eq!(log_star(4), 2);
        assert_eq!(log_star(16), 3);
        assert_eq!(log_star(65536), 4);
        assert_eq!(log_star(1 << 20), 5);
    }
}
