//! Plain-text edge lists and DOT export.
//!
//! Edge list format: a header line `N M kind`, then one `u v` pair per line
//! (0-based). For `bipartite` lists `N` and `M` are the left and right vertex
//! counts and each pair is `(left, right)`. For `undirected` and `directed`
//! lists `N` is the vertex count and `M` the number of edge lines. Blank lines
//! and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{BipartiteRotationGraph, GraphError, RotationGraph};

const DOT_LIMIT: usize = 2_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Undirected,
    Directed,
    Bipartite,
}

impl std::fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EdgeKind::Undirected => "undirected",
            EdgeKind::Directed => "directed",
            EdgeKind::Bipartite => "bipartite",
        })
    }
}

impl FromStr for EdgeKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "undirected" => Ok(EdgeKind::Undirected),
            "directed" => Ok(EdgeKind::Directed),
            "bipartite" => Ok(EdgeKind::Bipartite),
            other => Err(format!("unknown edge list kind `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeList {
    pub kind: EdgeKind,
    /// Vertex count, or left vertex count for bipartite lists.
    pub num_vertices: usize,
    /// Right vertex count for bipartite lists; equals `num_vertices` otherwise.
    pub num_right: usize,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeList {
    pub fn undirected(num_vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        EdgeList { kind: EdgeKind::Undirected, num_vertices, num_right: num_vertices, edges }
    }

    pub fn directed(num_vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        EdgeList { kind: EdgeKind::Directed, num_vertices, num_right: num_vertices, edges }
    }

    pub fn bipartite(num_left: usize, num_right: usize, edges: Vec<(usize, usize)>) -> Self {
        EdgeList { kind: EdgeKind::Bipartite, num_vertices: num_left, num_right, edges }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.edges.len() * 12);
        let second = match self.kind {
            EdgeKind::Bipartite => self.num_right,
            _ => self.edges.len(),
        };
        writeln!(out, "{} {} {}", self.num_vertices, second, self.kind).unwrap();
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) =
            lines.next().ok_or(GraphError::Parse { line: 0, message: "missing header".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [n, m, kind] = fields[..] else {
            return Err(GraphError::Parse { line: hline, message: "header must be `N M kind`".into() });
        };
        let num = |s: &str, line: usize| {
            s.parse::<usize>()
                .map_err(|e| GraphError::Parse { line, message: format!("bad number `{s}`: {e}") })
        };
        let n = num(n, hline)?;
        let m = num(m, hline)?;
        let kind: EdgeKind = kind.parse().map_err(|message| GraphError::Parse { line: hline, message })?;
        let mut edges = Vec::new();
        for (line, l) in lines {
            let mut it = l.split_whitespace();
            let (Some(u), Some(v), None) = (it.next(), it.next(), it.next()) else {
                return Err(GraphError::Parse { line, message: "expected `u v`".into() });
            };
            let (u, v) = (num(u, line)?, num(v, line)?);
            let right_bound = if kind == EdgeKind::Bipartite { m } else { n };
            if u >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u, bound: n });
            }
            if v >= right_bound {
                return Err(GraphError::VertexOutOfRange { vertex: v, bound: right_bound });
            }
            edges.push((u, v));
        }
        match kind {
            EdgeKind::Bipartite => Ok(EdgeList::bipartite(n, m, edges)),
            _ if edges.len() != m => Err(GraphError::Parse {
                line: hline,
                message: format!("header announces {m} edges, found {}", edges.len()),
            }),
            EdgeKind::Undirected => Ok(EdgeList::undirected(n, edges)),
            EdgeKind::Directed => Ok(EdgeList::directed(n, edges)),
        }
    }
}

impl RotationGraph {
    /// Graphviz rendering with one line per edge in port order. Half-loops
    /// are drawn as loops.
    pub fn to_dot(&self) -> Result<String, GraphError> {
        if self.num_vertices() > DOT_LIMIT {
            return Err(GraphError::TooLargeForDot(self.num_vertices()));
        }
        let mut out = String::from("graph G {\n");
        for v in 0..self.num_vertices() {
            writeln!(out, "  {v};").unwrap();
        }
        for (v, _, w, _) in self.edge_ports() {
            writeln!(out, "  {v} -- {w};").unwrap();
        }
        out.push_str("}\n");
        Ok(out)
    }
}

impl BipartiteRotationGraph {
    /// Graphviz rendering; left vertices are `l<i>`, right vertices `r<j>`.
    pub fn to_dot(&self) -> Result<String, GraphError> {
        let total = self.num_left() + self.num_right();
        if total > DOT_LIMIT {
            return Err(GraphError::TooLargeForDot(total));
        }
        let mut out = String::from("graph G {\n");
        for v in 0..self.num_left() {
            writeln!(out, "  l{v} [shape=box];").unwrap();
        }
        for w in 0..self.num_right() {
            writeln!(out, "  r{w};").unwrap();
        }
        for (v, w) in self.to_edge_list().edges {
            writeln!(out, "  l{v} -- r{w};").unwrap();
        }
        out.push_str("}\n");
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let list = EdgeList::undirected(3, vec![(0, 1), (1, 2), (2, 0)]);
        let text = list.to_text();
        assert!(text.starts_with("3 3 undirected\n"));
        assert_eq!(EdgeList::parse(&text).unwrap(), list);
        let b = EdgeList::bipartite(2, 3, vec![(0, 2), (1, 0)]);
        assert_eq!(EdgeList::parse(&b.to_text()).unwrap(), b);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(EdgeList::parse(""), Err(GraphError::Parse { .. })));
        assert!(matches!(EdgeList::parse("3 1 undirected\n0 3\n"), Err(GraphError::VertexOutOfRange { .. })));
        assert!(matches!(EdgeList::parse("3 2 undirected\n0 1\n"), Err(GraphError::Parse { .. })));
        assert!(matches!(EdgeList::parse("3 2 weird\n"), Err(GraphError::Parse { .. })));
    }

    #[test]
    fn dot_has_every_edge() {
        let g = crate::graph::complete(4, 0).unwrap();
        let dot = g.to_dot().unwrap();
        assert_eq!(dot.matches(" -- ").count(), 6);
        let big = crate::graph::cycle(2_001, 0).unwrap();
        assert_eq!(big.to_dot().unwrap_err(), GraphError::TooLargeForDot(2_001));
    }
}
