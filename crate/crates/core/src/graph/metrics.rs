use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::PortGraph;

/// A path or cycle length that may be infinite (no cycle, or disconnected).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Length {
    Finite(usize),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<usize> {
        match self {
            Length::Finite(n) => Some(n),
            Length::Infinite => None,
        }
    }

    /// Saturating product; `0 · ∞ = 0`.
    pub fn times(self, other: Length) -> Length {
        match (self, other) {
            (Length::Finite(0), _) | (_, Length::Finite(0)) => Length::Finite(0),
            (Length::Finite(a), Length::Finite(b)) => Length::Finite(a * b),
            _ => Length::Infinite,
        }
    }

    pub fn plus(self, other: Length) -> Length {
        match (self, other) {
            (Length::Finite(a), Length::Finite(b)) => Length::Finite(a + b),
            _ => Length::Infinite,
        }
    }
}

impl std::fmt::Display for Length {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Length::Finite(n) => write!(f, "{n}"),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

const NONE: usize = usize::MAX;

/// Length of the shortest cycle. Parallel edges give 2, a self-loop or
/// half-loop gives 1, a forest gives [`Length::Infinite`].
///
/// Runs a BFS from every node, remembering the port each node was entered
/// through so the tree edge is not mistaken for a cycle.
pub fn girth<G: PortGraph + ?Sized>(g: &G) -> Length {
    let n = g.node_count();
    let mut best = NONE;
    let mut dist = vec![NONE; n];
    let mut entry = vec![NONE; n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if best == 1 {
            break;
        }
        for &t in &touched {
            dist[t] = NONE;
            entry[t] = NONE;
        }
        touched.clear();
        queue.clear();
        dist[s] = 0;
        touched.push(s);
        queue.push_back(s);
        'bfs: while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for p in 0..g.node_degree(u) {
                if p == entry[u] {
                    continue;
                }
                let (w, q) = g.step(u, p);
                if dist[w] == NONE {
                    dist[w] = dist[u] + 1;
                    entry[w] = q;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    let len = if (w, q) == (u, p) { 1 } else { dist[u] + dist[w] + 1 };
                    if len < best {
                        best = len;
                        if best == 1 {
                            break 'bfs;
                        }
                    }
                }
            }
        }
    }
    if best == NONE {
        Length::Infinite
    } else {
        Length::Finite(best)
    }
}

fn bfs_distances<G: PortGraph + ?Sized>(g: &G, s: usize, dist: &mut [usize], queue: &mut VecDeque<usize>) {
    dist.fill(NONE);
    queue.clear();
    dist[s] = 0;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        for p in 0..g.node_degree(u) {
            let (w, _) = g.step(u, p);
            if dist[w] == NONE {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
}

/// Largest BFS distance over all ordered pairs; infinite when disconnected.
pub fn diameter<G: PortGraph + ?Sized>(g: &G) -> Length {
    let n = g.node_count();
    let mut dist = vec![NONE; n];
    let mut queue = VecDeque::new();
    let mut worst = 0;
    for s in 0..n {
        bfs_distances(g, s, &mut dist, &mut queue);
        for &d in &dist {
            if d == NONE {
                return Length::Infinite;
            }
            worst = worst.max(d);
        }
    }
    Length::Finite(worst)
}

pub fn is_connected<G: PortGraph + ?Sized>(g: &G) -> bool {
    let n = g.node_count();
    if n == 0 {
        return true;
    }
    let mut dist = vec![NONE; n];
    bfs_distances(g, 0, &mut dist, &mut VecDeque::new());
    dist.iter().all(|&d| d != NONE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, RotationGraph};

    #[test]
    fn six_cycle() {
        let g = cycle(6, 0).unwrap();
        assert_eq!(girth(&g), Length::Finite(6));
        assert_eq!(diameter(&g), Length::Finite(3));
    }

    #[test]
    fn k4() {
        let g = complete(4, 0).unwrap();
        assert_eq!(girth(&g), Length::Finite(3));
        assert_eq!(diameter(&g), Length::Finite(1));
    }

    #[test]
    fn perfect_matching_is_a_forest() {
        let g = RotationGraph::from_edges(4, &[(0, 1), (2, 3)], 0).unwrap();
        assert_eq!(girth(&g), Length::Infinite);
        assert_eq!(diameter(&g), Length::Infinite);
    }

    #[test]
    fn two_triangles_are_disconnected() {
        let edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)];
        let g = RotationGraph::from_edges(6, &edges, 0).unwrap();
        assert_eq!(diameter(&g), Length::Infinite);
        assert_eq!(girth(&g), Length::Finite(3));
        assert!(!is_connected(&g));
    }

    #[test]
    fn parallel_edges_and_loops() {
        let g = cycle(2, 0).unwrap();
        assert_eq!(girth(&g), Length::Finite(2));
        let g = cycle(1, 0).unwrap();
        assert_eq!(girth(&g), Length::Finite(1));
    }

    #[test]
    fn length_ordering() {
        assert!(Length::Finite(1_000_000) < Length::Infinite);
        assert_eq!(Length::Finite(0).times(Length::Infinite), Length::Finite(0));
    }
}
