//! Simple undirected graphs on at most 64 vertices.
//!
//! Adjacency is one bitset word per vertex. Graphs are immutable values:
//! every editing operation returns a new graph.

use std::fmt;

use thiserror::Error;

use crate::bits::{bit, low_mask, members, VertexSet};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count {0} is outside 1..=64")]
    VertexCount(usize),
    #[error("a cycle needs at least 3 vertices, got {0}")]
    CycleTooShort(usize),
    #[error("vertex {vertex} is out of range for a graph on {order} vertices")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("vertex set {set:#x} is not a subset of the {order} vertices")]
    SetOutOfRange { set: VertexSet, order: usize },
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),
    #[error("loops are not allowed (vertex {0})")]
    Loop(usize),
    #[error("malformed graph6 at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },
}

/// An undirected simple graph with `1..=64` vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

/// An edge `(u, v)` with `u < v`.
pub type Edge = (usize, usize);

/// The edges of a graph in lexicographic order, used as a stable edge index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    edges: Vec<Edge>,
}

impl EdgeList {
    pub fn as_slice(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Index of edge `{u, v}` in this list.
    pub fn position(&self, u: usize, v: usize) -> Option<usize> {
        let e = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&e).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::VertexCount(n));
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::Loop(u));
            }
            g.adj[u] |= bit(v);
            g.adj[v] |= bit(u);
        }
        Ok(g)
    }

    /// Builds a graph from raw adjacency words. Symmetry and the absence of
    /// loops are checked.
    pub fn from_adjacency(adj: Vec<VertexSet>) -> Result<Self, GraphError> {
        let n = adj.len();
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::VertexCount(n));
        }
        let mask = low_mask(n);
        for (v, &row) in adj.iter().enumerate() {
            if row & !mask != 0 {
                return Err(GraphError::SetOutOfRange { set: row, order: n });
            }
            if row & bit(v) != 0 {
                return Err(GraphError::Loop(v));
            }
            for u in members(row) {
                if adj[u] & bit(v) == 0 {
                    return Err(GraphError::NotAnEdge(v, u));
                }
            }
        }
        Ok(Graph { n, adj })
    }

    /// Unchecked constructor for callers that maintain the invariants themselves.
    pub(crate) fn from_adjacency_unchecked(adj: Vec<VertexSet>) -> Self {
        debug_assert!(Graph::from_adjacency(adj.clone()).is_ok());
        Graph { n: adj.len(), adj }
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        let all = low_mask(n);
        for v in 0..n {
            g.adj[v] = all & !bit(v);
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::CycleTooShort(n));
        }
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// The join `g1 + g2`: disjoint union plus every edge between the two parts.
    /// Vertices of `g2` are numbered after those of `g1`.
    pub fn join(g1: &Graph, g2: &Graph) -> Result<Self, GraphError> {
        let n = g1.n + g2.n;
        if n > MAX_VERTICES {
            return Err(GraphError::VertexCount(n));
        }
        let first = low_mask(g1.n);
        let second = low_mask(n) & !first;
        let mut adj = Vec::with_capacity(n);
        adj.extend(g1.adj.iter().map(|&row| row | second));
        adj.extend(g2.adj.iter().map(|&row| (row << g1.n) | first));
        Ok(Graph { n, adj })
    }

    /// Disjoint union, vertices of `g2` numbered after those of `g1`.
    pub fn disjoint_union(g1: &Graph, g2: &Graph) -> Result<Self, GraphError> {
        let n = g1.n + g2.n;
        if n > MAX_VERTICES {
            return Err(GraphError::VertexCount(n));
        }
        let mut adj = g1.adj.clone();
        adj.extend(g2.adj.iter().map(|&row| row << g1.n));
        Ok(Graph { n, adj })
    }

    pub fn complement(&self) -> Graph {
        let all = self.vertex_set();
        let adj = (0..self.n).map(|v| all & !self.adj[v] & !bit(v)).collect();
        Graph { n: self.n, adj }
    }

    /// Number of vertices.
    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.adj
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    #[inline]
    pub fn vertex_set(&self) -> VertexSet {
        low_mask(self.n)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    #[inline]
    pub fn adjacency(&self) -> &[VertexSet] {
        &self.adj
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & bit(v) != 0
    }

    pub fn edges(&self) -> EdgeList {
        let mut edges = Vec::with_capacity(self.size());
        for u in 0..self.n {
            for v in members(self.adj[u] & !low_mask(u + 1)) {
                edges.push((u, v));
            }
        }
        EdgeList { edges }
    }

    /// `true` if `set` is a clique.
    pub fn is_clique(&self, set: VertexSet) -> bool {
        members(set).all(|v| self.adj[v] & set == set & !bit(v))
    }

    /// `true` if `set` contains no edge.
    pub fn is_independent(&self, set: VertexSet) -> bool {
        members(set).all(|v| self.adj[v] & set == 0)
    }

    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(GraphError::NotAnEdge(u, v));
        }
        let mut g = self.clone();
        g.adj[u] &= !bit(v);
        g.adj[v] &= !bit(u);
        Ok(g)
    }

    pub fn add_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::Loop(u));
        }
        let mut g = self.clone();
        g.adj[u] |= bit(v);
        g.adj[v] |= bit(u);
        Ok(g)
    }

    /// Removes `v`; vertices above `v` shift down by one.
    pub fn delete_vertex(&self, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(v)?;
        if self.n == 1 {
            return Err(GraphError::VertexCount(0));
        }
        Ok(self.induced_unchecked(self.vertex_set() & !bit(v)))
    }

    /// The subgraph induced by `set`, relabeled in increasing vertex order.
    pub fn induced(&self, set: VertexSet) -> Result<Graph, GraphError> {
        if set & !self.vertex_set() != 0 {
            return Err(GraphError::SetOutOfRange { set, order: self.n });
        }
        if set == 0 {
            return Err(GraphError::VertexCount(0));
        }
        Ok(self.induced_unchecked(set))
    }

    fn induced_unchecked(&self, set: VertexSet) -> Graph {
        let keep: Vec<usize> = members(set).collect();
        let adj = keep
            .iter()
            .map(|&v| compress(self.adj[v] & set, set))
            .collect();
        Graph { n: keep.len(), adj }
    }

    /// Adds a vertex `n` whose neighbourhood is exactly `set`.
    pub fn add_vertex_with_neighborhood(&self, set: VertexSet) -> Result<Graph, GraphError> {
        if set & !self.vertex_set() != 0 {
            return Err(GraphError::SetOutOfRange { set, order: self.n });
        }
        if self.n == MAX_VERTICES {
            return Err(GraphError::VertexCount(self.n + 1));
        }
        let v = self.n;
        let mut adj = self.adj.clone();
        for u in members(set) {
            adj[u] |= bit(v);
        }
        adj.push(set);
        Ok(Graph { n: v + 1, adj })
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut adj = vec![0; self.n];
        for v in 0..self.n {
            adj[perm[v]] = map_set(self.adj[v], perm);
        }
        Graph { n: self.n, adj }
    }

    /// `true` if some vertex has no neighbours.
    pub fn has_isolated_vertex(&self) -> bool {
        self.adj.contains(&0)
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                order: self.n,
            })
        } else {
            Ok(())
        }
    }
}

/// Packs the bits of `row` that lie in `set` into the low positions, keeping order.
#[inline]
fn compress(row: VertexSet, set: VertexSet) -> VertexSet {
    let mut out = 0;
    for (i, v) in members(set).enumerate() {
        if row & bit(v) != 0 {
            out |= bit(i);
        }
    }
    out
}

/// Image of a vertex set under a permutation given as `perm[v]`.
#[inline]
pub fn map_set(set: VertexSet, perm: &[usize]) -> VertexSet {
    members(set).fold(0, |acc, v| acc | bit(perm[v]))
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({} ", self.n)?;
        f.write_str(&crate::graph6::to_graph6(self))?;
        f.write_str(")")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::graph6::to_graph6(self))
    }
}
