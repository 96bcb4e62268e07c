//! Rotation-map multigraphs.
//!
//! A [`RotationGraph`] stores a `d`-regular multigraph as the involution
//! `rot(v, i) = (w, j)`: the `i`-th edge at `v` leads to `w`, and arrives there
//! as the `j`-th edge of `w`. A [`BipartiteRotationGraph`] does the same for a
//! `(c, d)`-biregular bipartite graph with separate left and right port maps.
//! Ports are 0-based throughout.
//!
//! Parallel edges and self-loops are kept with multiplicity. A self-loop given
//! in an edge list occupies two ports. Graphs built by walk composition
//! ([`RotationGraph::square`]) additionally contain *half-loops*, ports with
//! `rot(v, i) = (v, i)`, one for every backtracking walk; user-supplied
//! rotation maps may not contain them.

mod generate;
mod io;
mod metrics;

pub use generate::{complete, complete_bipartite, cycle, random_biregular, random_regular};
pub use io::{EdgeKind, EdgeList};
pub use metrics::{diameter, girth, is_connected, Length};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which side of a bipartite graph a vertex lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} has degree {found}, expected {expected}")]
    NonRegular { vertex: usize, found: usize, expected: usize },
    #[error("{side} vertex {vertex} has degree {found}, expected {expected}")]
    NonBiregular { side: Side, vertex: usize, found: usize, expected: usize },
    #[error("edge counts disagree: {left}*{left_degree} != {right}*{right_degree}")]
    InconsistentCounts { left: usize, right: usize, left_degree: usize, right_degree: usize },
    #[error("half-loop at vertex {vertex}, port {port}")]
    HalfLoop { vertex: usize, port: usize },
    #[error("rotation map is not an involution at vertex {vertex}, port {port}")]
    NotInvolution { vertex: usize, port: usize },
    #[error("vertex {vertex} out of range (bound {bound})")]
    VertexOutOfRange { vertex: usize, bound: usize },
    #[error("port {port} out of range (degree {degree})")]
    PortOutOfRange { port: usize, degree: usize },
    #[error("even power {0} of a bipartite graph does not connect left to right")]
    EvenPower(usize),
    #[error("vertex {vertex} has out-degree {found}, expected {expected}")]
    NonRegularOutDegree { vertex: usize, found: usize, expected: usize },
    #[error("graph has {0} vertices; DOT export is limited to 2000")]
    TooLargeForDot(usize),
    #[error("could not generate the requested graph: {0}")]
    Generation(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("expected a {expected} edge list, found {found}")]
    WrongKind { expected: EdgeKind, found: EdgeKind },
}

/// Uniform view used by the distance and spectral routines. Bipartite graphs
/// expose the disjoint union of their sides: left vertex `v` is node `v`,
/// right vertex `w` is node `num_left + w`.
pub trait PortGraph {
    fn node_count(&self) -> usize;
    fn node_degree(&self, node: usize) -> usize;
    /// Follow `port` out of `node`; returns the far node and its arrival port.
    fn step(&self, node: usize, port: usize) -> (usize, usize);
}

/// A `d`-regular multigraph given by its rotation map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationGraph {
    num_vertices: usize,
    degree: usize,
    rot: Vec<(u32, u32)>,
}

impl RotationGraph {
    /// Builds a graph from an explicit rotation map, indexed `v * degree + i`.
    ///
    /// This is the entry point for fixed numberings; half-loops are rejected.
    pub fn from_rotation(
        num_vertices: usize,
        degree: usize,
        rot: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        if rot.len() != num_vertices * degree {
            return Err(GraphError::InconsistentCounts {
                left: num_vertices,
                right: rot.len(),
                left_degree: degree,
                right_degree: 1,
            });
        }
        for &(w, j) in &rot {
            if w >= num_vertices {
                return Err(GraphError::VertexOutOfRange { vertex: w, bound: num_vertices });
            }
            if j >= degree {
                return Err(GraphError::PortOutOfRange { port: j, degree });
            }
        }
        let rot = rot.into_iter().map(|(w, j)| (w as u32, j as u32)).collect();
        Self::from_raw(num_vertices, degree, rot, false)
    }

    /// Validating constructor shared with the walk-composition operations.
    pub(crate) fn from_raw(
        num_vertices: usize,
        degree: usize,
        rot: Vec<(u32, u32)>,
        allow_half_loops: bool,
    ) -> Result<Self, GraphError> {
        assert!(num_vertices < u32::MAX as usize && degree < u32::MAX as usize);
        debug_assert_eq!(rot.len(), num_vertices * degree);
        for v in 0..num_vertices {
            for i in 0..degree {
                let (w, j) = rot[v * degree + i];
                let back = rot[w as usize * degree + j as usize];
                if back != (v as u32, i as u32) {
                    return Err(GraphError::NotInvolution { vertex: v, port: i });
                }
                if !allow_half_loops && w as usize == v && j as usize == i {
                    return Err(GraphError::HalfLoop { vertex: v, port: i });
                }
            }
        }
        Ok(RotationGraph { num_vertices, degree, rot })
    }

    /// Builds a graph from undirected edges, numbering the edges around every
    /// vertex by a uniformly random permutation drawn from `seed`.
    ///
    /// A self-loop `(u, u)` takes two ports at `u`.
    pub fn from_edges(
        num_vertices: usize,
        edges: &[(usize, usize)],
        seed: u64,
    ) -> Result<Self, GraphError> {
        let incidences = incidence_lists(num_vertices, edges.iter().copied())?;
        let degree = incidences.first().map_or(0, Vec::len);
        for (v, inc) in incidences.iter().enumerate() {
            if inc.len() != degree {
                return Err(GraphError::NonRegular { vertex: v, found: inc.len(), expected: degree });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // port_of[edge][end] = port index at that endpoint
        let mut port_of = vec![[0u32; 2]; edges.len()];
        for mut inc in incidences {
            inc.shuffle(&mut rng);
            for (port, (e, end)) in inc.into_iter().enumerate() {
                port_of[e][end] = port as u32;
            }
        }
        let mut rot = vec![(0u32, 0u32); num_vertices * degree];
        for (e, &(u, w)) in edges.iter().enumerate() {
            let [pu, pw] = port_of[e];
            rot[u * degree + pu as usize] = (w as u32, pw);
            rot[w * degree + pw as usize] = (u as u32, pu);
        }
        Self::from_raw(num_vertices, degree, rot, false)
    }

    /// Same as [`RotationGraph::from_edges`], reading an undirected [`EdgeList`].
    pub fn from_edge_list(list: &EdgeList, seed: u64) -> Result<Self, GraphError> {
        if list.kind != EdgeKind::Undirected {
            return Err(GraphError::WrongKind { expected: EdgeKind::Undirected, found: list.kind });
        }
        Self::from_edges(list.num_vertices, &list.edges, seed)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of edges, counting a half-loop as half an edge (so `N·d/2`).
    pub fn num_edges(&self) -> usize {
        self.num_vertices * self.degree / 2
    }

    #[inline]
    pub fn rotate(&self, v: usize, port: usize) -> (usize, usize) {
        let (w, j) = self.rot[v * self.degree + port];
        (w as usize, j as usize)
    }

    #[inline]
    pub fn neighbor(&self, v: usize, port: usize) -> usize {
        self.rot[v * self.degree + port].0 as usize
    }

    /// Re-checks the involution, e.g. after deserializing.
    pub fn validate(&self) -> Result<(), GraphError> {
        if self.rot.len() != self.num_vertices * self.degree
            || self.rot.iter().any(|&(w, j)| w as usize >= self.num_vertices || j as usize >= self.degree)
        {
            return Err(GraphError::NotInvolution { vertex: 0, port: 0 });
        }
        Self::from_raw(self.num_vertices, self.degree, self.rot.clone(), true).map(|_| ())
    }

    pub fn half_loop_count(&self) -> usize {
        (0..self.num_vertices)
            .flat_map(|v| (0..self.degree).map(move |i| (v, i)))
            .filter(|&(v, i)| self.rotate(v, i) == (v, i))
            .count()
    }

    /// Every edge once, as `(v, i, w, j)` with `(v, i) <= (w, j)`. Half-loops
    /// appear as `(v, i, v, i)`.
    pub fn edge_ports(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges() + 1);
        for v in 0..self.num_vertices {
            for i in 0..self.degree {
                let (w, j) = self.rotate(v, i);
                if (v, i) <= (w, j) {
                    out.push((v, i, w, j));
                }
            }
        }
        out
    }

    /// Undirected edge list in port order. Fails on half-loops, which the
    /// text format cannot express.
    pub fn to_edge_list(&self) -> Result<EdgeList, GraphError> {
        let mut edges = Vec::with_capacity(self.num_edges());
        for (v, i, w, j) in self.edge_ports() {
            if (v, i) == (w, j) {
                return Err(GraphError::HalfLoop { vertex: v, port: i });
            }
            edges.push((v, w));
        }
        Ok(EdgeList::undirected(self.num_vertices, edges))
    }

    /// Adjacency counts: `A[v][w]` = number of ports at `v` leading to `w`.
    pub fn adjacency_counts(&self) -> Vec<Vec<(usize, u32)>> {
        adjacency_of(self)
    }

    /// The graph of length-2 walks. Port `i * d + j` at `v` follows port `i`
    /// and then port `j`; the walk back is numbered by the reversed arrival
    /// ports. Backtracking walks become half-loops.
    pub fn square(&self) -> RotationGraph {
        let d = self.degree;
        let dd = d * d;
        let mut rot = vec![(0u32, 0u32); self.num_vertices * dd];
        for v in 0..self.num_vertices {
            for i in 0..d {
                let (w, k) = self.rotate(v, i);
                for j in 0..d {
                    let (x, l) = self.rotate(w, j);
                    rot[v * dd + i * d + j] = (x as u32, (l * d + k) as u32);
                }
            }
        }
        RotationGraph::from_raw(self.num_vertices, dd, rot, true)
            .expect("squared rotation map is an involution")
    }

    /// `square` applied `times` times: the walk graph of length `2^times`.
    pub fn repeated_square(&self, times: usize) -> RotationGraph {
        let mut g = self.clone();
        for _ in 0..times {
            g = g.square();
        }
        g
    }
}

impl PortGraph for RotationGraph {
    fn node_count(&self) -> usize {
        self.num_vertices
    }
    fn node_degree(&self, _node: usize) -> usize {
        self.degree
    }
    fn step(&self, node: usize, port: usize) -> (usize, usize) {
        self.rotate(node, port)
    }
}

/// A `(c, d)`-biregular bipartite multigraph: `N` left vertices of degree `c`,
/// `M` right vertices of degree `d`, with `N·c = M·d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteRotationGraph {
    num_left: usize,
    num_right: usize,
    left_degree: usize,
    right_degree: usize,
    left_rot: Vec<(u32, u32)>,
    right_rot: Vec<(u32, u32)>,
}

impl BipartiteRotationGraph {
    /// Builds a graph from the left rotation map `left_rot[v * c + i] = (w, j)`;
    /// the right map is derived and checked to be a bijection.
    pub fn from_rotation(
        num_left: usize,
        num_right: usize,
        left_degree: usize,
        right_degree: usize,
        left_rot: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        if num_left * left_degree != num_right * right_degree {
            return Err(GraphError::InconsistentCounts {
                left: num_left,
                right: num_right,
                left_degree,
                right_degree,
            });
        }
        if left_rot.len() != num_left * left_degree {
            return Err(GraphError::InconsistentCounts {
                left: num_left,
                right: left_rot.len(),
                left_degree,
                right_degree: 1,
            });
        }
        for &(w, j) in &left_rot {
            if w >= num_right {
                return Err(GraphError::VertexOutOfRange { vertex: w, bound: num_right });
            }
            if j >= right_degree {
                return Err(GraphError::PortOutOfRange { port: j, degree: right_degree });
            }
        }
        let left_rot = left_rot.into_iter().map(|(w, j)| (w as u32, j as u32)).collect();
        Self::from_raw(num_left, num_right, left_degree, right_degree, left_rot)
    }

    pub(crate) fn from_raw(
        num_left: usize,
        num_right: usize,
        left_degree: usize,
        right_degree: usize,
        left_rot: Vec<(u32, u32)>,
    ) -> Result<Self, GraphError> {
        if num_left * left_degree != num_right * right_degree {
            return Err(GraphError::InconsistentCounts {
                left: num_left,
                right: num_right,
                left_degree,
                right_degree,
            });
        }
        const UNSET: (u32, u32) = (u32::MAX, u32::MAX);
        let mut right_rot = vec![UNSET; num_right * right_degree];
        for v in 0..num_left {
            for i in 0..left_degree {
                let (w, j) = left_rot[v * left_degree + i];
                let slot = &mut right_rot[w as usize * right_degree + j as usize];
                if *slot != UNSET {
                    return Err(GraphError::NotInvolution { vertex: v, port: i });
                }
                *slot = (v as u32, i as u32);
            }
        }
        Ok(BipartiteRotationGraph { num_left, num_right, left_degree, right_degree, left_rot, right_rot })
    }

    /// Builds a biregular graph from `(left, right)` edges with seeded random
    /// port numbering on both sides.
    pub fn from_edges(
        num_left: usize,
        num_right: usize,
        edges: &[(usize, usize)],
        seed: u64,
    ) -> Result<Self, GraphError> {
        let mut left_inc: Vec<Vec<usize>> = vec![Vec::new(); num_left];
        let mut right_inc: Vec<Vec<usize>> = vec![Vec::new(); num_right];
        for (e, &(v, w)) in edges.iter().enumerate() {
            if v >= num_left {
                return Err(GraphError::VertexOutOfRange { vertex: v, bound: num_left });
            }
            if w >= num_right {
                return Err(GraphError::VertexOutOfRange { vertex: w, bound: num_right });
            }
            left_inc[v].push(e);
            right_inc[w].push(e);
        }
        let c = left_inc.first().map_or(0, Vec::len);
        let d = right_inc.first().map_or(0, Vec::len);
        for (side, inc, expected) in [(Side::Left, &left_inc, c), (Side::Right, &right_inc, d)] {
            if let Some((vertex, l)) = inc.iter().enumerate().find(|(_, l)| l.len() != expected) {
                return Err(GraphError::NonBiregular { side, vertex, found: l.len(), expected });
            }
        }
        if num_left * c != num_right * d {
            return Err(GraphError::InconsistentCounts {
                left: num_left,
                right: num_right,
                left_degree: c,
                right_degree: d,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut left_port = vec![0u32; edges.len()];
        let mut right_port = vec![0u32; edges.len()];
        for mut inc in left_inc {
            inc.shuffle(&mut rng);
            for (p, e) in inc.into_iter().enumerate() {
                left_port[e] = p as u32;
            }
        }
        for mut inc in right_inc {
            inc.shuffle(&mut rng);
            for (p, e) in inc.into_iter().enumerate() {
                right_port[e] = p as u32;
            }
        }
        let mut left_rot = vec![(0u32, 0u32); num_left * c];
        for (e, &(v, w)) in edges.iter().enumerate() {
            left_rot[v * c + left_port[e] as usize] = (w as u32, right_port[e]);
        }
        Self::from_raw(num_left, num_right, c, d, left_rot)
    }

    /// Same as [`BipartiteRotationGraph::from_edges`], reading a bipartite [`EdgeList`].
    pub fn from_edge_list(list: &EdgeList, seed: u64) -> Result<Self, GraphError> {
        if list.kind != EdgeKind::Bipartite {
            return Err(GraphError::WrongKind { expected: EdgeKind::Bipartite, found: list.kind });
        }
        Self::from_edges(list.num_vertices, list.num_right, &list.edges, seed)
    }

    /// Re-checks that the two rotation maps are mutually inverse.
    pub fn validate(&self) -> Result<(), GraphError> {
        let ok = self.left_rot.len() == self.num_left * self.left_degree
            && self.right_rot.len() == self.num_right * self.right_degree
            && self.left_rot.iter().all(|&(w, j)| (w as usize) < self.num_right && (j as usize) < self.right_degree)
            && Self::from_raw(self.num_left, self.num_right, self.left_degree, self.right_degree, self.left_rot.clone())
                .is_ok_and(|g| g.right_rot == self.right_rot);
        if ok {
            Ok(())
        } else {
            Err(GraphError::NotInvolution { vertex: 0, port: 0 })
        }
    }

    pub fn num_left(&self) -> usize {
        self.num_left
    }
    pub fn num_right(&self) -> usize {
        self.num_right
    }
    pub fn left_degree(&self) -> usize {
        self.left_degree
    }
    pub fn right_degree(&self) -> usize {
        self.right_degree
    }
    pub fn num_edges(&self) -> usize {
        self.num_left * self.left_degree
    }

    /// Left port `i` of `v` → `(right vertex, right port)`.
    #[inline]
    pub fn rotate_left(&self, v: usize, i: usize) -> (usize, usize) {
        let (w, j) = self.left_rot[v * self.left_degree + i];
        (w as usize, j as usize)
    }

    /// Right port `j` of `w` → `(left vertex, left port)`.
    #[inline]
    pub fn rotate_right(&self, w: usize, j: usize) -> (usize, usize) {
        let (v, i) = self.right_rot[w * self.right_degree + j];
        (v as usize, i as usize)
    }

    /// Edges as `(left, right)` pairs, ordered by left vertex and port.
    pub fn to_edge_list(&self) -> EdgeList {
        let mut edges = Vec::with_capacity(self.num_edges());
        for v in 0..self.num_left {
            for i in 0..self.left_degree {
                edges.push((v, self.rotate_left(v, i).0));
            }
        }
        EdgeList::bipartite(self.num_left, self.num_right, edges)
    }

    /// Biadjacency counts, one row per left vertex.
    pub fn biadjacency_counts(&self) -> Vec<Vec<(usize, u32)>> {
        (0..self.num_left)
            .map(|v| {
                let mut row: Vec<(usize, u32)> = Vec::new();
                let mut targets: Vec<usize> =
                    (0..self.left_degree).map(|i| self.rotate_left(v, i).0).collect();
                targets.sort_unstable();
                for w in targets {
                    match row.last_mut() {
                        Some((last, c)) if *last == w => *c += 1,
                        _ => row.push((w, 1)),
                    }
                }
                row
            })
            .collect()
    }

    /// Walks of odd length `e` starting on the left, alternating sides.
    ///
    /// A left port is the mixed-radix tuple of ports taken along the walk;
    /// the matching right port is the tuple of arrival ports in reverse.
    /// Degrees become `(c^⌈e/2⌉ d^⌊e/2⌋, d^⌈e/2⌉ c^⌊e/2⌋)`.
    pub fn power(&self, e: usize) -> Result<BipartiteRotationGraph, GraphError> {
        if e % 2 == 0 {
            return Err(GraphError::EvenPower(e));
        }
        let (c, d) = (self.left_degree, self.right_degree);
        let up = e.div_ceil(2) as u32;
        let down = (e / 2) as u32;
        let new_c = c.pow(up) * d.pow(down);
        let new_d = d.pow(up) * c.pow(down);
        // radix of the step-th port taken from the left side
        let radix = |step: usize| if step % 2 == 0 { c } else { d };
        let mut left_rot = vec![(0u32, 0u32); self.num_left * new_c];
        let mut ports = vec![0usize; e];
        let mut back = vec![0usize; e];
        for v in 0..self.num_left {
            for code in 0..new_c {
                // decode the walk ports, most significant step first
                let mut rem = code;
                for step in (0..e).rev() {
                    ports[step] = rem % radix(step);
                    rem /= radix(step);
                }
                let mut node = v;
                for step in 0..e {
                    let (next, arrival) = if step % 2 == 0 {
                        self.rotate_left(node, ports[step])
                    } else {
                        self.rotate_right(node, ports[step])
                    };
                    node = next;
                    back[step] = arrival;
                }
                // the reverse walk starts on the right: step s of the reverse
                // uses arrival port back[e-1-s], with radix d on even s
                let mut right_code = 0usize;
                for s in 0..e {
                    let r = if s % 2 == 0 { d } else { c };
                    right_code = right_code * r + back[e - 1 - s];
                }
                left_rot[v * new_c + code] = (node as u32, right_code as u32);
            }
        }
        BipartiteRotationGraph::from_raw(self.num_left, self.num_right, new_c, new_d, left_rot)
    }

    /// The left-to-left walk graph of length 2 restricted to the left side, as
    /// a regular rotation graph (used for cross-checks).
    pub fn left_square(&self) -> RotationGraph {
        let (c, d) = (self.left_degree, self.right_degree);
        let deg = c * d;
        let mut rot = vec![(0u32, 0u32); self.num_left * deg];
        for v in 0..self.num_left {
            for i in 0..c {
                let (w, j) = self.rotate_left(v, i);
                for k in 0..d {
                    let (x, l) = self.rotate_right(w, k);
                    rot[v * deg + i * d + k] = (x as u32, (l * d + j) as u32);
                }
            }
        }
        RotationGraph::from_raw(self.num_left, deg, rot, true).expect("walk rotation is an involution")
    }
}

impl PortGraph for BipartiteRotationGraph {
    fn node_count(&self) -> usize {
        self.num_left + self.num_right
    }
    fn node_degree(&self, node: usize) -> usize {
        if node < self.num_left {
            self.left_degree
        } else {
            self.right_degree
        }
    }
    fn step(&self, node: usize, port: usize) -> (usize, usize) {
        if node < self.num_left {
            let (w, j) = self.rotate_left(node, port);
            (self.num_left + w, j)
        } else {
            self.rotate_right(node - self.num_left, port)
        }
    }
}

/// Bipartite double cover of a directed graph with constant out-degree: left
/// copy `v` joins right copy `w` for every arc `v → w`.
pub fn double_cover(
    num_vertices: usize,
    arcs: &[(usize, usize)],
    seed: u64,
) -> Result<BipartiteRotationGraph, GraphError> {
    let mut out_degree = vec![0usize; num_vertices];
    for &(v, w) in arcs {
        for x in [v, w] {
            if x >= num_vertices {
                return Err(GraphError::VertexOutOfRange { vertex: x, bound: num_vertices });
            }
        }
        out_degree[v] += 1;
    }
    if let Some(&expected) = out_degree.first() {
        if let Some((vertex, &found)) = out_degree.iter().enumerate().find(|(_, &o)| o != expected) {
            return Err(GraphError::NonRegularOutDegree { vertex, found, expected });
        }
    }
    BipartiteRotationGraph::from_edges(num_vertices, num_vertices, arcs, seed)
}

/// Double cover of a directed [`EdgeList`].
pub fn double_cover_of(list: &EdgeList, seed: u64) -> Result<BipartiteRotationGraph, GraphError> {
    if list.kind != EdgeKind::Directed {
        return Err(GraphError::WrongKind { expected: EdgeKind::Directed, found: list.kind });
    }
    double_cover(list.num_vertices, &list.edges, seed)
}

fn incidence_lists(
    num_vertices: usize,
    edges: impl Iterator<Item = (usize, usize)>,
) -> Result<Vec<Vec<(usize, usize)>>, GraphError> {
    let mut inc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_vertices];
    for (e, (u, w)) in edges.enumerate() {
        for x in [u, w] {
            if x >= num_vertices {
                return Err(GraphError::VertexOutOfRange { vertex: x, bound: num_vertices });
            }
        }
        inc[u].push((e, 0));
        inc[w].push((e, 1));
    }
    Ok(inc)
}

/// Sorted adjacency counts of any port graph.
pub(crate) fn adjacency_of<G: PortGraph + ?Sized>(g: &G) -> Vec<Vec<(usize, u32)>> {
    (0..g.node_count())
        .map(|v| {
            let mut targets: Vec<usize> = (0..g.node_degree(v)).map(|i| g.step(v, i).0).collect();
            targets.sort_unstable();
            let mut row: Vec<(usize, u32)> = Vec::new();
            for w in targets {
                match row.last_mut() {
                    Some((last, c)) if *last == w => *c += 1,
                    _ => row.push((w, 1)),
                }
            }
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_cycle() -> RotationGraph {
        RotationGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], 0).unwrap()
    }

    fn assert_involution(g: &RotationGraph) {
        for v in 0..g.num_vertices() {
            for i in 0..g.degree() {
                let (w, j) = g.rotate(v, i);
                assert_eq!(g.rotate(w, j), (v, i));
            }
        }
    }

    #[test]
    fn four_cycle_is_two_regular() {
        let g = four_cycle();
        assert_eq!((g.num_vertices(), g.degree()), (4, 2));
        assert_involution(&g);
    }

    #[test]
    fn dangling_edge_is_non_regular() {
        let err = RotationGraph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3)], 0).unwrap_err();
        assert!(matches!(err, GraphError::NonRegular { .. }));
    }

    #[test]
    fn numbering_is_deterministic_per_seed() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)];
        let a = RotationGraph::from_edges(4, &edges, 7).unwrap();
        let b = RotationGraph::from_edges(4, &edges, 7).unwrap();
        assert_eq!(a, b);
        let others: Vec<_> = (0..20).map(|s| RotationGraph::from_edges(4, &edges, s).unwrap()).collect();
        assert!(others.iter().any(|g| *g != a), "seed should change the numbering");
    }

    #[test]
    fn self_loop_takes_two_ports() {
        let g = RotationGraph::from_edges(2, &[(0, 0), (1, 1), (0, 1), (0, 1)], 3).unwrap();
        assert_eq!(g.degree(), 4);
        assert_eq!(g.half_loop_count(), 0);
        assert_involution(&g);
    }

    #[test]
    fn explicit_half_loop_rejected() {
        let err = RotationGraph::from_rotation(1, 1, vec![(0, 0)]).unwrap_err();
        assert_eq!(err, GraphError::HalfLoop { vertex: 0, port: 0 });
        let err = RotationGraph::from_rotation(2, 1, vec![(1, 0), (1, 0)]).unwrap_err();
        assert!(matches!(err, GraphError::NotInvolution { .. }));
    }

    #[test]
    fn k23_is_3_2_biregular() {
        let edges: Vec<_> = (0..2).flat_map(|v| (0..3).map(move |w| (v, w))).collect();
        let g = BipartiteRotationGraph::from_edges(2, 3, &edges, 1).unwrap();
        assert_eq!((g.left_degree(), g.right_degree()), (3, 2));
        for v in 0..2 {
            for i in 0..3 {
                let (w, j) = g.rotate_left(v, i);
                assert_eq!(g.rotate_right(w, j), (v, i));
            }
        }
    }

    #[test]
    fn inconsistent_counts_rejected() {
        let err = BipartiteRotationGraph::from_rotation(2, 3, 2, 2, vec![(0, 0); 4]).unwrap_err();
        assert!(matches!(err, GraphError::InconsistentCounts { .. }));
    }

    #[test]
    fn random_6_10_biregular_on_20_12() {
        let g = random_biregular(20, 12, 6, 10, 5, false).unwrap();
        assert_eq!(g.num_edges(), 120);
        assert_eq!((g.left_degree(), g.right_degree()), (6, 10));
    }

    #[test]
    fn square_of_four_cycle() {
        let g = four_cycle();
        let sq = g.square();
        assert_eq!((sq.num_vertices(), sq.degree()), (4, 4));
        // two backtracking walks per vertex
        assert_eq!(sq.half_loop_count(), 8);
        assert_involution(&sq);
    }

    #[test]
    fn square_keeps_original_edges_when_every_vertex_has_a_loop() {
        let edges = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (2, 0)];
        let g = RotationGraph::from_edges(3, &edges, 2).unwrap();
        let sq = g.square();
        let adj = sq.adjacency_counts();
        for &(u, w) in &edges[3..] {
            assert!(adj[u].iter().any(|&(x, _)| x == w));
        }
    }

    #[test]
    fn square_degree_5_4() {
        let g = random_regular(5, 4, 1, true).unwrap();
        let sq = g.square();
        assert_eq!((sq.num_vertices(), sq.degree()), (5, 16));
    }

    #[test]
    fn bipartite_cube_degrees() {
        let g = random_biregular(6, 4, 2, 3, 9, false).unwrap();
        let cube = g.power(3).unwrap();
        assert_eq!((cube.left_degree(), cube.right_degree()), (12, 18));
        assert_eq!((cube.num_left(), cube.num_right()), (6, 4));
        assert_eq!(g.power(1).unwrap(), g);
        assert_eq!(g.power(2).unwrap_err(), GraphError::EvenPower(2));
    }

    #[test]
    fn double_cover_of_directed_triangle() {
        let g = double_cover(3, &[(0, 1), (1, 2), (2, 0)], 0).unwrap();
        assert_eq!((g.num_left(), g.num_right(), g.left_degree(), g.right_degree()), (3, 3, 1, 1));
    }

    #[test]
    fn double_cover_missing_arc() {
        let err = double_cover(3, &[(0, 1), (1, 2), (2, 0), (0, 2)], 0).unwrap_err();
        assert!(matches!(err, GraphError::NonRegularOutDegree { .. }));
    }
}
