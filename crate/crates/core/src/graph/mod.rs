//! Undirected communication networks.
//!
//! Vertices are labeled `0..n`. Every agent's closed neighborhood contains the
//! agent itself, so feedback routing and the probability constants of the
//! analysis module can be written over closed neighborhoods only.

mod cover;
mod generators;
mod independence;

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub use cover::{
    clique_cover_number_exact, greedy_clique_cover, greedy_dominating_set, verify_ratio_bound,
    CliqueCover, RatioBound, EXACT_COVER_LIMIT,
};
pub use generators::{generate, GraphFamily};
pub use independence::{
    independence_number_exact, maximal_independent_set, maximum_independent_set_exact,
    DEFAULT_EXACT_LIMIT,
};

pub type Vertex = usize;

/// Immutable undirected simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Sorted open neighborhoods.
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate pairs (in either
    /// orientation) collapse to one edge; self-loops are rejected.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::validation(format!("self-loop on vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { n, adj })
    }

    pub fn edgeless(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn are_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// `{v}` together with every vertex adjacent to `v`, sorted ascending.
    pub fn closed_neighborhood(&self, v: Vertex) -> Result<Vec<Vertex>> {
        self.check_vertex(v)?;
        let mut out = Vec::with_capacity(self.adj[v].len() + 1);
        let pos = self.adj[v].partition_point(|&w| w < v);
        out.extend_from_slice(&self.adj[v][..pos]);
        out.push(v);
        out.extend_from_slice(&self.adj[v][pos..]);
        Ok(out)
    }

    /// `|N_v|`, i.e. degree plus one.
    pub fn closed_neighborhood_size(&self, v: Vertex) -> usize {
        self.adj[v].len() + 1
    }

    pub fn is_complete(&self) -> bool {
        self.adj.iter().all(|list| list.len() + 1 == self.n)
    }

    pub fn is_independent(&self, set: &[Vertex]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.are_adjacent(u, v)))
    }

    pub fn is_clique(&self, set: &[Vertex]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| self.are_adjacent(u, v)))
    }

    /// Subgraph induced by `keep`, relabeled so that `keep[i]` becomes `i`.
    pub fn induced_subgraph(&self, keep: &[Vertex]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            self.check_vertex(v)?;
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(keep.len(), &edges)
    }

    /// Adjacency as bitmasks; only valid for `n <= 64`.
    pub(crate) fn bit_rows(&self) -> Vec<u64> {
        debug_assert!(self.n <= 64);
        self.adj
            .iter()
            .map(|list| list.iter().fold(0u64, |m, &w| m | (1u64 << w)))
            .collect()
    }

    /// Parses the edge-list text format: a header line `n m` followed by
    /// `m` lines `u v`. Lines starting with `#` and blank lines are skipped.
    pub fn parse_edge_list(text: &str, source: &str) -> Result<Graph> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: source.to_string(),
            line,
            message,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing header \"n m\"".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(hline, format!("expected \"n m\", got {header:?}")));
        }
        let parse_num = |line: usize, s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(line, format!("not a nonnegative integer: {s:?}")))
        };
        let n = parse_num(hline, fields[0])?;
        let m = parse_num(hline, fields[1])?;

        let mut edges = Vec::with_capacity(m);
        for (line, body) in lines {
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(parse_err(line, format!("expected \"u v\", got {body:?}")));
            }
            let u = parse_num(line, fields[0])?;
            let v = parse_num(line, fields[1])?;
            if u >= n || v >= n {
                return Err(parse_err(
                    line,
                    format!("vertex {} out of range for n = {n}", u.max(v)),
                ));
            }
            if u == v {
                return Err(parse_err(line, format!("self-loop on vertex {u}")));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(parse_err(
                hline,
                format!("header declares {m} edges, found {}", edges.len()),
            ));
        }
        Graph::new(n, &edges)
    }

    pub fn read_edge_list(path: &Path) -> Result<Graph> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Graph::parse_edge_list(&text, &path.display().to_string())
    }

    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}
