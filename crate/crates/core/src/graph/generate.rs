//! Small graph families used as components and baselines.

use std::collections::HashSet;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BipartiteRotationGraph, GraphError, RotationGraph};

const RESTARTS: usize = 2_000;

/// Cycle on `n` vertices (`n = 2` gives a doubled edge, `n = 1` a self-loop).
pub fn cycle(n: usize, seed: u64) -> Result<RotationGraph, GraphError> {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    RotationGraph::from_edges(n, &edges, seed)
}

pub fn complete(n: usize, seed: u64) -> Result<RotationGraph, GraphError> {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |w| (u, w))).collect();
    RotationGraph::from_edges(n, &edges, seed)
}

pub fn complete_bipartite(n: usize, m: usize, seed: u64) -> Result<BipartiteRotationGraph, GraphError> {
    let edges: Vec<_> = (0..n).flat_map(|v| (0..m).map(move |w| (v, w))).collect();
    BipartiteRotationGraph::from_edges(n, m, &edges, seed)
}

/// Uniform-ish random `d`-regular graph by stub matching. With `simple`, loops
/// and parallel edges are avoided during matching (restarting when stuck).
pub fn random_regular(n: usize, d: usize, seed: u64, simple: bool) -> Result<RotationGraph, GraphError> {
    if (n * d) % 2 == 1 {
        return Err(GraphError::Generation(format!("n*d = {} is odd", n * d)));
    }
    if simple && d >= n && n > 0 && d > 0 {
        return Err(GraphError::Generation(format!("no simple {d}-regular graph on {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RESTARTS {
        if let Some(edges) = match_stubs(n, d, simple, &mut rng) {
            return RotationGraph::from_edges(n, &edges, rng.next_u64());
        }
    }
    Err(GraphError::Generation(format!("gave up on simple {d}-regular graph on {n} vertices")))
}

fn match_stubs(n: usize, d: usize, simple: bool, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut edges = Vec::with_capacity(n * d / 2);
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let ok = |a: usize, b: usize, seen: &HashSet<(usize, usize)>| {
        !simple || (a != b && !seen.contains(&(a.min(b), a.max(b))))
    };
    while !stubs.is_empty() {
        let mut picked = None;
        for _ in 0..64 {
            let i = rng.random_range(0..stubs.len());
            let j = rng.random_range(0..stubs.len());
            if i != j && ok(stubs[i], stubs[j], &seen) {
                picked = Some((i, j));
                break;
            }
        }
        if picked.is_none() {
            // exhaustive fallback before declaring a dead end
            let candidates: Vec<(usize, usize)> = (0..stubs.len())
                .flat_map(|i| (i + 1..stubs.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| ok(stubs[i], stubs[j], &seen))
                .collect();
            if candidates.is_empty() {
                return None;
            }
            picked = Some(candidates[rng.random_range(0..candidates.len())]);
        }
        let (i, j) = picked.unwrap();
        let (a, b) = (stubs[i], stubs[j]);
        let (hi, lo) = (i.max(j), i.min(j));
        stubs.swap_remove(hi);
        stubs.swap_remove(lo);
        seen.insert((a.min(b), a.max(b)));
        edges.push((a, b));
    }
    Some(edges)
}

/// Random `(c, d)`-biregular bipartite graph on `(n, m)` vertices; `simple`
/// forbids parallel edges.
pub fn random_biregular(
    n: usize,
    m: usize,
    c: usize,
    d: usize,
    seed: u64,
    simple: bool,
) -> Result<BipartiteRotationGraph, GraphError> {
    if n * c != m * d {
        return Err(GraphError::InconsistentCounts { left: n, right: m, left_degree: c, right_degree: d });
    }
    if simple && (c > m || d > n) {
        return Err(GraphError::Generation(format!("no simple ({c},{d})-biregular graph on ({n},{m})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..RESTARTS {
        let mut right: Vec<usize> = (0..m).flat_map(|w| std::iter::repeat_n(w, d)).collect();
        let mut edges = Vec::with_capacity(n * c);
        let mut seen = HashSet::new();
        for v in 0..n {
            for _ in 0..c {
                let mut pick = None;
                for _ in 0..64 {
                    let j = rng.random_range(0..right.len());
                    if !simple || !seen.contains(&(v, right[j])) {
                        pick = Some(j);
                        break;
                    }
                }
                if pick.is_none() {
                    let options: Vec<usize> =
                        (0..right.len()).filter(|&j| !seen.contains(&(v, right[j]))).collect();
                    if options.is_empty() {
                        continue 'attempt;
                    }
                    pick = Some(options[rng.random_range(0..options.len())]);
                }
                let w = right.swap_remove(pick.unwrap());
                seen.insert((v, w));
                edges.push((v, w));
            }
        }
        return BipartiteRotationGraph::from_edges(n, m, &edges, rng.next_u64());
    }
    Err(GraphError::Generation(format!("gave up on simple ({c},{d})-biregular graph on ({n},{m})")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_random_regular_has_no_loops_or_multi_edges() {
        for seed in 0..10 {
            let g = random_regular(30, 7, seed, true).unwrap();
            for row in g.adjacency_counts().iter().enumerate() {
                for &(w, count) in row.1 {
                    assert_ne!(w, row.0);
                    assert_eq!(count, 1);
                }
            }
        }
    }

    #[test]
    fn odd_stub_count_rejected() {
        assert!(random_regular(5, 3, 0, false).is_err());
    }

    #[test]
    fn simple_biregular_has_no_multi_edges() {
        let g = random_biregular(10, 6, 3, 5, 4, true).unwrap();
        for row in g.biadjacency_counts() {
            assert!(row.iter().all(|&(_, c)| c == 1));
        }
    }
}
