//! Deterministic graph families for benchmarks and stress corpora.
//!
//! Randomized families draw from a counter-based generator seeded
//! explicitly, so a given `(parameters, seed)` pair always produces the
//! same graph on every platform.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a simple cycle needs at least three vertices");
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are simple")
}

/// Path on `n >= 1` vertices.
pub fn path(n: usize) -> Graph {
    assert!(n >= 1, "a path needs at least one vertex");
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path edges are simple")
}

/// Random `d`-regular graph from the pairing model: pair up `n * d`
/// half-edges uniformly and reject the attempt whenever a self-loop or a
/// repeated edge appears. Fails only if `n * d` is odd, `d >= n`, or no
/// simple matching shows up within the attempt budget (vanishingly rare
/// for small `d`).
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, String> {
    if d == 0 {
        return Graph::new(n, []).map_err(|e| e.to_string());
    }
    if n * d % 2 != 0 {
        return Err(format!("{d}-regular graph on {n} vertices needs an even half-edge count"));
    }
    if d >= n {
        return Err(format!("cannot make a simple {d}-regular graph on {n} vertices"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..10_000 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
        stubs.shuffle(&mut rng);
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !edges.insert((u, v)) {
                continue 'attempt;
            }
        }
        return Ok(Graph::new(n, edges).expect("pairing produced a simple graph"));
    }
    Err(format!("no simple {d}-regular graph on {n} vertices found within the attempt budget"))
}

/// Random graph with every degree at most `max_degree`, aiming for
/// `target_edges` edges (possibly fewer when the degree budget runs out).
pub fn random_bounded_degree(
    n: usize,
    max_degree: usize,
    target_edges: usize,
    seed: u64,
) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degrees = vec![0usize; n];
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut attempts = 50 * target_edges + 200;
    while edges.len() < target_edges && attempts > 0 {
        attempts -= 1;
        if n < 2 {
            break;
        }
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let (u, v) = (a.min(b), a.max(b));
        if degrees[u] >= max_degree || degrees[v] >= max_degree || edges.contains(&(u, v)) {
            continue;
        }
        edges.insert((u, v));
        degrees[u] += 1;
        degrees[v] += 1;
    }
    Graph::new(n, edges).expect("construction maintains simplicity")
}
