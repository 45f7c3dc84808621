//! Finite simple undirected graphs with stable vertex and edge indexing.
//!
//! Edge indices follow input order and are the ground truth for everything
//! downstream: signature storage, enumeration order, and search determinism
//! all key off `0..m` in the order edges were given. Each edge also carries a
//! canonical orientation (lower vertex id to higher); an [`OrientedEdge`] is
//! an edge index plus a reversal flag relative to that orientation.

use std::collections::HashSet;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// An oriented edge: edge index plus direction relative to the canonical
/// (low vertex -> high vertex) orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrientedEdge {
    pub edge: usize,
    pub reversed: bool,
}

impl OrientedEdge {
    pub fn forward(edge: usize) -> Self {
        OrientedEdge {
            edge,
            reversed: false,
        }
    }

    pub fn reverse(self) -> Self {
        OrientedEdge {
            edge: self.edge,
            reversed: !self.reversed,
        }
    }
}

/// Finite simple undirected graph.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    /// Canonical endpoints per edge index, always `(lo, hi)` with `lo < hi`.
    edges: Vec<(usize, usize)>,
    /// Per-vertex incidence lists: `(neighbor, edge index)`.
    adj: Vec<Vec<(usize, usize)>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from an explicit vertex count and edge list.
    ///
    /// Edges may be given in either orientation; they are stored canonically
    /// but keep their input index. Self-loops, duplicate edges, and
    /// out-of-range endpoints are rejected.
    pub fn new(n: usize, edge_list: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges = Vec::new();
        let mut seen = HashSet::new();
        for (u, v) in edge_list {
            if u == v {
                return Err(Error::pre(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::pre(format!(
                    "edge ({u}, {v}) out of range for vertex count {n}"
                )));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::pre(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            edges.push(e);
        }
        let mut adj = vec![Vec::new(); n];
        for (j, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, j));
            adj[v].push((u, j));
        }
        Ok(Graph { n, edges, adj })
    }

    /// Parses the edge-list text format: one `u v` pair per line, `#` starts
    /// a comment, blank lines are ignored. The vertex count is one more than
    /// the largest vertex id; edge indices follow file order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut max_vertex = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let mut tokens = line.split_whitespace();
            let (a, b) = match (tokens.next(), tokens.next()) {
                (None, _) => continue,
                (Some(a), Some(b)) => (a, b),
                (Some(_), None) => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "expected two vertex ids".into(),
                    })
                }
            };
            if let Some(extra) = tokens.next() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unexpected trailing token '{extra}'"),
                });
            }
            let parse_vertex = |tok: &str| -> Result<usize> {
                tok.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("malformed vertex id '{tok}'"),
                })
            };
            let u = parse_vertex(a)?;
            let v = parse_vertex(b)?;
            if u == v {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("self-loop at vertex {u}"),
                });
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("duplicate edge ({}, {})", e.0, e.1),
                });
            }
            max_vertex = Some(max_vertex.map_or(u.max(v), |m: usize| m.max(u.max(v))));
            edges.push(e);
        }
        let n = max_vertex.map_or(0, |m| m + 1);
        Graph::new(n, edges)
    }

    /// The complete bipartite graph `K_{d,d}` with parts `0..d` and `d..2d`.
    /// Edges are ordered part-major: `(0, d), (0, d+1), ..., (d-1, 2d-1)`.
    pub fn complete_bipartite(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::pre("complete bipartite graph requires d >= 1"));
        }
        let mut edges = Vec::with_capacity(d * d);
        for u in 0..d {
            for v in 0..d {
                edges.push((u, d + v));
            }
        }
        Graph::new(2 * d, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical `(lo, hi)` endpoints in edge-index order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.edges[edge]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Incident `(neighbor, edge index)` pairs in insertion order.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    /// Edge index joining `u` and `v`, if present.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.adj[u].iter().find(|&&(w, _)| w == v).map(|&(_, j)| j)
    }

    pub fn tail(&self, e: OrientedEdge) -> usize {
        let (lo, hi) = self.edges[e.edge];
        if e.reversed {
            hi
        } else {
            lo
        }
    }

    pub fn head(&self, e: OrientedEdge) -> usize {
        let (lo, hi) = self.edges[e.edge];
        if e.reversed {
            lo
        } else {
            hi
        }
    }

    /// The edge oriented so its tail is `from`. `from` must be an endpoint.
    pub fn oriented_from(&self, edge: usize, from: usize) -> OrientedEdge {
        let (lo, hi) = self.edges[edge];
        debug_assert!(from == lo || from == hi);
        OrientedEdge {
            edge,
            reversed: from == hi,
        }
    }

    /// True iff `walk` is a non-empty closed sequence of valid oriented edges.
    pub fn is_closed_walk(&self, walk: &[OrientedEdge]) -> bool {
        if walk.is_empty() {
            return false;
        }
        if walk.iter().any(|e| e.edge >= self.edges.len()) {
            return false;
        }
        for pair in walk.windows(2) {
            if self.head(pair[0]) != self.tail(pair[1]) {
                return false;
            }
        }
        self.head(*walk.last().unwrap()) == self.tail(walk[0])
    }

    /// Connected component label per vertex, labels dense from 0 in order of
    /// first appearance.
    pub fn component_labels(&self) -> (usize, Vec<usize>) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        for root in 0..self.n {
            if label[root] != usize::MAX {
                continue;
            }
            let mut queue = std::collections::VecDeque::from([root]);
            label[root] = count;
            while let Some(u) = queue.pop_front() {
                for &(w, _) in &self.adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (count, label)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.component_labels().0 == 1
    }

    /// Common degree if the graph is regular (requires at least one vertex).
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.adj.first()?.len();
        self.adj.iter().all(|l| l.len() == first).then_some(first)
    }

    /// Dense 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    /// Proper 2-coloring witness, absent iff some component has an odd cycle.
    pub fn bipartition(&self) -> Option<BipartitionWitness> {
        let mut side = vec![u8::MAX; self.n];
        for root in 0..self.n {
            if side[root] != u8::MAX {
                continue;
            }
            side[root] = 0;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &(w, _) in &self.adj[u] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        queue.push_back(w);
                    } else if side[w] == side[u] {
                        return None;
                    }
                }
            }
        }
        let mut parts = [Vec::new(), Vec::new()];
        for (v, &s) in side.iter().enumerate() {
            parts[s as usize].push(v);
        }
        Some(BipartitionWitness { parts, side })
    }

    /// Fundamental cycles of a BFS spanning forest, one per non-tree edge in
    /// edge-index order. Each cycle is a closed oriented walk consisting of
    /// the non-tree edge followed by the tree path back to its tail; the
    /// count is always `m - n + c` with `c` the number of components.
    pub fn fundamental_cycles(&self) -> Vec<Vec<OrientedEdge>> {
        let mut visited = vec![false; self.n];
        // Oriented edge from parent into the vertex, depth from its root.
        let mut parent_edge: Vec<Option<OrientedEdge>> = vec![None; self.n];
        let mut depth = vec![0usize; self.n];
        let mut is_tree = vec![false; self.edges.len()];
        for root in 0..self.n {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &(w, j) in &self.adj[u] {
                    if !visited[w] {
                        visited[w] = true;
                        is_tree[j] = true;
                        parent_edge[w] = Some(self.oriented_from(j, u));
                        depth[w] = depth[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }

        let mut cycles = Vec::new();
        for (j, &(u, v)) in self.edges.iter().enumerate() {
            if is_tree[j] {
                continue;
            }
            // Tree paths from u and v up to their lowest common ancestor.
            let (mut a, mut b) = (u, v);
            let mut up_from_v: Vec<OrientedEdge> = Vec::new();
            let mut down_to_u: Vec<OrientedEdge> = Vec::new();
            while depth[b] > depth[a] {
                let pe = parent_edge[b].unwrap();
                up_from_v.push(pe.reverse());
                b = self.tail(pe);
            }
            while depth[a] > depth[b] {
                let pe = parent_edge[a].unwrap();
                down_to_u.push(pe);
                a = self.tail(pe);
            }
            while a != b {
                let pa = parent_edge[a].unwrap();
                let pb = parent_edge[b].unwrap();
                down_to_u.push(pa);
                up_from_v.push(pb.reverse());
                a = self.tail(pa);
                b = self.tail(pb);
            }
            let mut cycle = vec![OrientedEdge::forward(j)];
            cycle.extend(up_from_v);
            cycle.extend(down_to_u.into_iter().rev());
            debug_assert!(self.is_closed_walk(&cycle));
            cycles.push(cycle);
        }
        cycles
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(n={}, m={})", self.n, self.edges.len())
    }
}

/// Two disjoint vertex sets covering V such that every edge crosses.
#[derive(Debug, Clone)]
pub struct BipartitionWitness {
    parts: [Vec<usize>; 2],
    side: Vec<u8>,
}

impl BipartitionWitness {
    pub fn parts(&self) -> (&[usize], &[usize]) {
        (&self.parts[0], &self.parts[1])
    }

    pub fn side_of(&self, v: usize) -> u8 {
        self.side[v]
    }
}
