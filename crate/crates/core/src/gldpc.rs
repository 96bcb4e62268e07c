//! Generalized LDPC codes: every graph edge is a code bit and every vertex
//! constrains the bits on its edges to a codeword of a short linear subcode.

use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::BitMatrix;
use crate::graph::{BipartiteRotationGraph, RotationGraph};

/// Largest code length for which a declared minimum distance is verified.
pub const DISTANCE_CHECK_MAX_N: usize = 25;
/// Largest bit count accepted by [`GldpcCode::true_rate`].
pub const TRUE_RATE_MAX_BITS: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GldpcError {
    #[error("unknown subcode `{0}`")]
    UnknownCode(String),
    #[error("parity-check matrix has rank {rank} < {rows} rows")]
    RankDeficient { rows: usize, rank: usize },
    #[error("declared minimum distance {declared} but exhaustive search gives {found:?}")]
    DistanceMismatch { declared: usize, found: Option<usize> },
    #[error("vertex {vertex} has degree {degree} but its subcode has length {n}")]
    DegreeMismatch { vertex: usize, degree: usize, n: usize },
    #[error("vertex {vertex} port {port} is a half-loop and cannot carry a bit")]
    HalfLoop { vertex: usize, port: usize },
    #[error("{n_bits} bits exceed the rank computation limit {TRUE_RATE_MAX_BITS}")]
    TooLarge { n_bits: usize },
    #[error("word has length {found}, code has {expected} bits")]
    LengthMismatch { expected: usize, found: usize },
    #[error("malformed code file: {0}")]
    Format(String),
}

/// Binary linear `[n, k, d]` code given by a full-rank parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCode {
    pub name: String,
    n: usize,
    k: usize,
    d_min: Option<usize>,
    h: BitMatrix,
}

impl LinearCode {
    pub fn from_parity_check(name: impl Into<String>, h: BitMatrix) -> Result<Self, GldpcError> {
        let rank = h.rank();
        if rank < h.rows() {
            return Err(GldpcError::RankDeficient { rows: h.rows(), rank });
        }
        Ok(LinearCode { name: name.into(), n: h.cols(), k: h.cols() - h.rows(), d_min: None, h })
    }

    /// Records `d` after confirming it by exhaustive search (for `n` up to
    /// [`DISTANCE_CHECK_MAX_N`]; larger codes keep the declaration unchecked).
    pub fn with_distance(mut self, d: usize) -> Result<Self, GldpcError> {
        if self.n <= DISTANCE_CHECK_MAX_N {
            let found = self.min_distance();
            if found != Some(d) {
                return Err(GldpcError::DistanceMismatch { declared: d, found });
            }
        }
        self.d_min = Some(d);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn checks(&self) -> usize {
        self.n - self.k
    }

    pub fn d_min(&self) -> Option<usize> {
        self.d_min
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    /// Generator rows spanning the code.
    pub fn generator(&self) -> BitMatrix {
        self.h.null_space()
    }

    /// All `2^k` codewords as bit masks (bit `i` is position `i`).
    pub fn codewords(&self) -> Vec<u64> {
        assert!(self.n <= 64 && self.k <= 24, "codeword enumeration limited to n ≤ 64, k ≤ 24");
        let g = self.generator();
        let rows: Vec<u64> = (0..g.rows()).map(|r| g.row_words(r)[0]).collect();
        // Gray-code walk over the span
        let mut words = Vec::with_capacity(1 << self.k);
        let mut cur = 0u64;
        words.push(cur);
        for i in 1u64..(1 << self.k) {
            cur ^= rows[i.trailing_zeros() as usize];
            words.push(cur);
        }
        words
    }

    /// Smallest nonzero codeword weight; `None` for the zero code.
    pub fn min_distance(&self) -> Option<usize> {
        self.codewords().into_iter().filter(|&w| w != 0).map(|w| w.count_ones() as usize).min()
    }

    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        bits.len() == self.n && self.h.syndrome(bits).iter().all(|&s| s == 0)
    }
}

/// Parameters of the library subcodes.
pub const LIBRARY: [&str; 7] = ["[20,15,3]", "[15,11,3]", "[7,4,3]", "[16,12,2]", "[25,21,2]", "[9,6,2]", "spc-N"];

/// Looks up a subcode by name: `[n,k,d]` or `[n,k]` for the library codes,
/// `spc-N` for the single parity check code of length `N`.
///
/// * `[15,11,3]`, `[7,4,3]`: Hamming codes, columns `1..2^r` in binary.
/// * `[20,15,3]`: columns `1..=20` as 5-bit values. A `[20,15,4]` code does
///   not exist (a distance-4 code with 5 checks has length at most 16), so the
///   name `[20,15,4]` resolves to this code.
/// * `[16,12,2]`, `[25,21,2]`, `[9,6,2]`: all nonzero `r`-bit columns followed
///   by repeats of the unit columns.
pub fn subcode_library(name: &str) -> Result<LinearCode, GldpcError> {
    let key: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(n) = key.strip_prefix("spc-").or_else(|| key.strip_prefix("spc")) {
        let n: usize = n.parse().map_err(|_| GldpcError::UnknownCode(name.into()))?;
        return single_parity_check(n);
    }
    let (n, r, d) = match key.as_str() {
        "[20,15,3]" | "[20,15,4]" | "[20,15]" => (20, 5, 3),
        "[15,11,3]" | "[15,11]" => (15, 4, 3),
        "[7,4,3]" | "[7,4]" => (7, 3, 3),
        "[16,12,2]" | "[16,12]" => (16, 4, 2),
        "[25,21,2]" | "[25,21]" => (25, 4, 2),
        "[9,6,2]" | "[9,6]" => (9, 3, 2),
        _ => return Err(GldpcError::UnknownCode(name.into())),
    };
    let columns: Vec<u64> = if n < (1 << r) {
        (1..=n as u64).collect()
    } else {
        let mut cols: Vec<u64> = (1..(1u64 << r)).collect();
        let units: Vec<u64> = (0..r).map(|b| 1u64 << b).collect();
        let mut i = 0;
        while cols.len() < n {
            cols.push(units[i % r]);
            i += 1;
        }
        cols
    };
    let h = BitMatrix::from_column_values(r, &columns);
    LinearCode::from_parity_check(format!("[{n},{},{d}]", n - r), h)?.with_distance(d)
}

pub fn single_parity_check(n: usize) -> Result<LinearCode, GldpcError> {
    if n < 2 {
        return Err(GldpcError::UnknownCode(format!("spc-{n}")));
    }
    let h = BitMatrix::from_rows(&[vec![1; n]]);
    LinearCode::from_parity_check(format!("[{n},{},2]", n - 1), h)?.with_distance(2)
}

/// Tanner graph of a GLDPC code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TannerGraph {
    Regular(RotationGraph),
    Bipartite(BipartiteRotationGraph),
}

impl TannerGraph {
    pub fn num_constraints(&self) -> usize {
        match self {
            TannerGraph::Regular(g) => g.num_vertices(),
            TannerGraph::Bipartite(g) => g.num_left() + g.num_right(),
        }
    }

    pub fn constraint_degree(&self, v: usize) -> usize {
        match self {
            TannerGraph::Regular(g) => g.degree(),
            TannerGraph::Bipartite(g) if v < g.num_left() => g.left_degree(),
            TannerGraph::Bipartite(g) => g.right_degree(),
        }
    }

    fn is_left(&self, v: usize) -> bool {
        match self {
            TannerGraph::Regular(_) => true,
            TannerGraph::Bipartite(g) => v < g.num_left(),
        }
    }
}

/// How subcodes are assigned to vertices.
#[derive(Clone, Debug)]
pub enum Assignment {
    Uniform(LinearCode),
    /// Left and right sides of a bipartite graph.
    Sides { left: LinearCode, right: LinearCode },
    /// `even` on even-numbered vertices, `odd` on odd ones.
    Alternating { even: LinearCode, odd: LinearCode },
}

/// Sparse binary matrix stored by rows of sorted column indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub row_support: Vec<Vec<u32>>,
}

impl SparseMatrix {
    pub fn column_support(&self) -> Vec<Vec<u32>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, row) in self.row_support.iter().enumerate() {
            for &c in row {
                cols[c as usize].push(r as u32);
            }
        }
        cols
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows, self.cols);
        for (r, row) in self.row_support.iter().enumerate() {
            for &c in row {
                m.set(r, c as usize, true);
            }
        }
        m
    }

    /// MacKay's alist text: dimensions, maximum weights, per-column and
    /// per-row weights, then 1-based indices per column and per row, padded
    /// with zeros.
    pub fn to_alist(&self) -> String {
        let cols = self.column_support();
        let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
        let max_row = self.row_support.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = String::new();
        writeln!(out, "{} {}", self.cols, self.rows).unwrap();
        writeln!(out, "{max_col} {max_row}").unwrap();
        let join = |v: Vec<String>| v.join(" ");
        writeln!(out, "{}", join(cols.iter().map(|c| c.len().to_string()).collect())).unwrap();
        writeln!(out, "{}", join(self.row_support.iter().map(|r| r.len().to_string()).collect())).unwrap();
        let padded = |list: &[u32], width: usize| {
            let mut v: Vec<String> = list.iter().map(|&x| (x + 1).to_string()).collect();
            v.resize(width, "0".into());
            v.join(" ")
        };
        for c in &cols {
            writeln!(out, "{}", padded(c, max_col)).unwrap();
        }
        for r in &self.row_support {
            writeln!(out, "{}", padded(r, max_row)).unwrap();
        }
        out
    }

    pub fn from_alist(text: &str) -> Result<Self, GldpcError> {
        let bad = |m: &str| GldpcError::Format(m.to_string());
        let mut nums = text.split_whitespace().map(|t| t.parse::<usize>().map_err(|_| bad("non-numeric token")));
        let mut next = || nums.next().ok_or_else(|| bad("truncated alist"))?;
        let (cols, rows) = (next()?, next()?);
        let (max_col, max_row) = (next()?, next()?);
        let col_w: Vec<usize> = (0..cols).map(|_| next()).collect::<Result<_, _>>()?;
        let row_w: Vec<usize> = (0..rows).map(|_| next()).collect::<Result<_, _>>()?;
        for &w in &col_w {
            for _ in 0..max_col {
                next()?;
            }
            let _ = w;
        }
        let mut row_support = Vec::with_capacity(rows);
        for &w in &row_w {
            let mut row = Vec::with_capacity(w);
            for _ in 0..max_row {
                let x = next()?;
                if x > 0 {
                    row.push((x - 1) as u32);
                }
            }
            if row.len() != w {
                return Err(bad("row weight disagrees with row list"));
            }
            row_support.push(row);
        }
        Ok(SparseMatrix { rows, cols, row_support })
    }
}

/// A GLDPC code: Tanner graph, per-vertex subcodes, and the compiled
/// parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GldpcCode {
    pub graph: TannerGraph,
    /// Distinct subcodes; `assignment[v]` indexes this list.
    pub codes: Vec<LinearCode>,
    pub assignment: Vec<usize>,
    /// `edge_order[v][i]` is the bit carried by port `i` of vertex `v`.
    pub edge_order: Vec<Vec<u32>>,
    pub n_bits: usize,
    /// First row of vertex `v`'s block in `h_global`.
    pub row_offset: Vec<usize>,
    pub h_global: SparseMatrix,
}

impl GldpcCode {
    pub fn code_of(&self, v: usize) -> &LinearCode {
        &self.codes[self.assignment[v]]
    }

    pub fn num_checks(&self) -> usize {
        self.h_global.rows
    }

    /// `1 − Σ_v (n_v − k_v) / n_bits`.
    pub fn design_rate(&self) -> Ratio<i64> {
        Ratio::new(self.n_bits as i64 - self.num_checks() as i64, self.n_bits as i64)
    }

    /// `1 − rank(H)/n_bits` over GF(2).
    pub fn true_rate(&self) -> Result<Ratio<i64>, GldpcError> {
        if self.n_bits > TRUE_RATE_MAX_BITS {
            return Err(GldpcError::TooLarge { n_bits: self.n_bits });
        }
        let rank = self.h_global.to_dense().rank();
        Ok(Ratio::new((self.n_bits - rank) as i64, self.n_bits as i64))
    }

    /// Bits seen by vertex `v`, in subcode position order.
    pub fn local_word(&self, v: usize, word: &[u8]) -> Vec<u8> {
        self.edge_order[v].iter().map(|&e| word[e as usize]).collect()
    }

    pub fn is_codeword(&self, word: &[u8]) -> Result<bool, GldpcError> {
        if word.len() != self.n_bits {
            return Err(GldpcError::LengthMismatch { expected: self.n_bits, found: word.len() });
        }
        Ok(self.h_global.row_support.iter().all(|row| row.iter().fold(0u8, |a, &c| a ^ word[c as usize]) == 0))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("code serializes")
    }

    /// Parses a serialized code and recompiles it from its graph and subcodes,
    /// rejecting files whose stored matrices disagree.
    pub fn from_json(text: &str) -> Result<Self, GldpcError> {
        let code: GldpcCode = serde_json::from_str(text).map_err(|e| GldpcError::Format(e.to_string()))?;
        match &code.graph {
            TannerGraph::Regular(g) => g.validate(),
            TannerGraph::Bipartite(g) => g.validate(),
        }
        .map_err(|e| GldpcError::Format(e.to_string()))?;
        if code.assignment.len() != code.graph.num_constraints()
            || code.assignment.iter().any(|&a| a >= code.codes.len())
        {
            return Err(GldpcError::Format("subcode assignment does not match the graph".into()));
        }
        let rebuilt = assemble_indexed(code.graph.clone(), code.codes.clone(), code.assignment.clone())?;
        if rebuilt != code {
            return Err(GldpcError::Format("stored matrices disagree with graph and subcodes".into()));
        }
        Ok(code)
    }
}

/// Numbers the bits and records each vertex's ports in ascending order.
fn edge_numbering(graph: &TannerGraph) -> Result<(usize, Vec<Vec<u32>>), GldpcError> {
    match graph {
        TannerGraph::Regular(g) => {
            let d = g.degree();
            let mut order = vec![vec![u32::MAX; d]; g.num_vertices()];
            let mut next = 0u32;
            for v in 0..g.num_vertices() {
                for i in 0..d {
                    if order[v][i] != u32::MAX {
                        continue;
                    }
                    let (w, j) = g.rotate(v, i);
                    if (w, j) == (v, i) {
                        return Err(GldpcError::HalfLoop { vertex: v, port: i });
                    }
                    order[v][i] = next;
                    order[w][j] = next;
                    next += 1;
                }
            }
            Ok((next as usize, order))
        }
        TannerGraph::Bipartite(g) => {
            let (n, c, d) = (g.num_left(), g.left_degree(), g.right_degree());
            let mut order: Vec<Vec<u32>> = (0..n).map(|v| (0..c).map(|i| (v * c + i) as u32).collect()).collect();
            for w in 0..g.num_right() {
                order.push((0..d).map(|j| {
                    let (v, i) = g.rotate_right(w, j);
                    (v * c + i) as u32
                }).collect());
            }
            Ok((n * c, order))
        }
    }
}

/// Compiles `graph` and `assignment` into a GLDPC code. Bits are numbered by
/// first appearance in (vertex, port) order; subcode position `i` of vertex
/// `v` is port `i`.
pub fn assemble(graph: TannerGraph, assignment: &Assignment) -> Result<GldpcCode, GldpcError> {
    let nv = graph.num_constraints();
    let (codes, assign): (Vec<LinearCode>, Vec<usize>) = match assignment {
        Assignment::Uniform(c) => (vec![c.clone()], vec![0; nv]),
        Assignment::Sides { left, right } => {
            (vec![left.clone(), right.clone()], (0..nv).map(|v| usize::from(!graph.is_left(v))).collect())
        }
        Assignment::Alternating { even, odd } => (vec![even.clone(), odd.clone()], (0..nv).map(|v| v % 2).collect()),
    };
    assemble_indexed(graph, codes, assign)
}

fn assemble_indexed(graph: TannerGraph, codes: Vec<LinearCode>, assign: Vec<usize>) -> Result<GldpcCode, GldpcError> {
    let (n_bits, edge_order) = edge_numbering(&graph)?;
    let nv = graph.num_constraints();
    let mut row_offset = Vec::with_capacity(nv);
    let mut rows = Vec::new();
    for v in 0..nv {
        let code = &codes[assign[v]];
        let degree = graph.constraint_degree(v);
        if code.n() != degree {
            return Err(GldpcError::DegreeMismatch { vertex: v, degree, n: code.n() });
        }
        row_offset.push(rows.len());
        let h = code.parity_check();
        for r in 0..h.rows() {
            // a bit on a self-loop occupies two positions; its entries cancel mod 2
            let mut cols: Vec<u32> = h.row_support(r).into_iter().map(|i| edge_order[v][i]).collect();
            cols.sort_unstable();
            let mut row: Vec<u32> = Vec::with_capacity(cols.len());
            for c in cols {
                if row.last() == Some(&c) {
                    row.pop();
                } else {
                    row.push(c);
                }
            }
            rows.push(row);
        }
    }
    let h_global = SparseMatrix { rows: rows.len(), cols: n_bits, row_support: rows };
    Ok(GldpcCode { graph, codes, assignment: assign, edge_order, n_bits, row_offset, h_global })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, random_regular};

    #[test]
    fn hamming_15_11() {
        let c = subcode_library("[15,11,3]").unwrap();
        assert_eq!((c.n(), c.k(), c.d_min()), (15, 11, Some(3)));
        assert_eq!(c.codewords().len(), 2048);
    }

    #[test]
    fn library_parameters_verified() {
        for (name, n, k, d) in [
            ("[20,15,3]", 20, 15, 3),
            ("[7,4,3]", 7, 4, 3),
            ("[16,12,2]", 16, 12, 2),
            ("[25,21,2]", 25, 21, 2),
            ("[9,6,2]", 9, 6, 2),
            ("spc-5", 5, 4, 2),
        ] {
            let c = subcode_library(name).unwrap();
            assert_eq!((c.n(), c.k(), c.min_distance()), (n, k, Some(d)), "{name}");
        }
        assert_eq!(subcode_library("[20,15,4]").unwrap().d_min(), Some(3));
        assert!(matches!(subcode_library("[21,16]"), Err(GldpcError::UnknownCode(_))));
    }

    #[test]
    fn no_distance_four_code_with_five_checks_and_length_twenty() {
        // distance 4 with r checks allows length at most 2^(r-1) = 16,
        // reached by the odd-weight columns
        let odd: Vec<u64> = (1..32u64).filter(|c| c.count_ones() % 2 == 1).collect();
        assert_eq!(odd.len(), 16);
        let h = BitMatrix::from_column_values(5, &odd);
        assert_eq!(LinearCode::from_parity_check("x", h).unwrap().min_distance(), Some(4));
    }

    #[test]
    fn spc_has_single_all_ones_row() {
        let c = single_parity_check(6).unwrap();
        assert_eq!(c.parity_check().rows(), 1);
        assert_eq!(c.parity_check().row_support(0), (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn rank_deficient_matrix_rejected() {
        let h = BitMatrix::from_rows(&[vec![1, 1, 0], vec![1, 1, 0]]);
        assert!(matches!(LinearCode::from_parity_check("x", h), Err(GldpcError::RankDeficient { .. })));
    }

    #[test]
    fn regular_assembly_counts() {
        let g = random_regular(12, 7, 1, true).unwrap();
        let code = assemble(TannerGraph::Regular(g), &Assignment::Uniform(subcode_library("[7,4]").unwrap())).unwrap();
        assert_eq!(code.n_bits, 42);
        assert_eq!(code.num_checks(), 36);
        assert_eq!(code.design_rate(), Ratio::new(1, 7));
        // every bit appears in exactly two vertices' port lists
        let mut seen = vec![0; code.n_bits];
        for row in &code.edge_order {
            for &e in row {
                seen[e as usize] += 1;
            }
        }
        assert!(seen.iter().all(|&s| s == 2));
        assert!(code.true_rate().unwrap() >= code.design_rate());
    }

    #[test]
    fn full_rate_subcode_gives_rate_one() {
        let h = BitMatrix::zeros(0, 3);
        let trivial = LinearCode::from_parity_check("[3,3]", h).unwrap();
        let code = assemble(TannerGraph::Regular(complete(4, 0).unwrap()), &Assignment::Uniform(trivial)).unwrap();
        assert_eq!(code.design_rate(), Ratio::new(1, 1));
    }

    #[test]
    fn parallel_edges_with_spc_are_rank_deficient() {
        let g = RotationGraph::from_edges(2, &[(0, 1), (0, 1), (0, 1)], 0).unwrap();
        let code = assemble(TannerGraph::Regular(g), &Assignment::Uniform(single_parity_check(3).unwrap())).unwrap();
        assert_eq!(code.design_rate(), Ratio::new(1, 3));
        assert_eq!(code.true_rate().unwrap(), Ratio::new(2, 3));
    }

    #[test]
    fn degree_mismatch() {
        let g = complete(5, 0).unwrap();
        let err = assemble(TannerGraph::Regular(g), &Assignment::Uniform(single_parity_check(3).unwrap())).unwrap_err();
        assert_eq!(err, GldpcError::DegreeMismatch { vertex: 0, degree: 4, n: 3 });
    }

    #[test]
    fn alternating_assignment() {
        let g = random_regular(10, 9, 0, true).unwrap();
        let a = Assignment::Alternating {
            even: subcode_library("[9,6]").unwrap(),
            odd: single_parity_check(9).unwrap(),
        };
        let code = assemble(TannerGraph::Regular(g), &a).unwrap();
        assert_eq!(code.num_checks(), 5 * 3 + 5);
        assert_eq!(code.code_of(3).k(), 8);
    }

    #[test]
    fn alist_round_trip() {
        let g = random_regular(8, 7, 2, true).unwrap();
        let code = assemble(TannerGraph::Regular(g), &Assignment::Uniform(subcode_library("[7,4]").unwrap())).unwrap();
        let text = code.h_global.to_alist();
        assert!(text.starts_with("28 24\n"));
        assert_eq!(SparseMatrix::from_alist(&text).unwrap(), code.h_global);
        let back = GldpcCode::from_json(&code.to_json()).unwrap();
        assert_eq!(back, code);
        let mut tampered = code.clone();
        tampered.h_global.row_support[0].pop();
        assert!(matches!(GldpcCode::from_json(&tampered.to_json()), Err(GldpcError::Format(_))));
    }
}
