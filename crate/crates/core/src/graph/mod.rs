//! Small simple undirected graphs stored as one `u64` neighbor mask per vertex.
//!
//! Every graph in this crate has between 1 and 64 vertices, numbered
//! `0..n`. Adjacency is symmetric and irreflexive; constructors enforce this.

mod canon;
mod chromatic;
mod families;
mod graph6;
mod iso;

use std::fmt;

use thiserror::Error;

pub use canon::{canonical_form, canonical_labeling, CanonicalForm};
pub use chromatic::{chromatic_number, clique_number, dsatur_coloring, is_k_colorable};
pub use families::{
    anticlique, clique, complete_multipartite, cycle, disjoint_cliques, disjoint_union, join,
    path, star, turan, turan_class_sizes, FamilySpec,
};
pub use graph6::{parse_edge_list, parse_graph6, to_edge_list, to_graph6};
pub use iso::{contains_induced, find_isomorphism, induced_copies, is_isomorphic, InducedMatcher};

/// Largest supported order.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph order {0} is outside 1..=64")]
    Order(usize),
    #[error("vertex {vertex} out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("adjacency is not symmetric between {0} and {1}")]
    Asymmetric(usize, usize),
    #[error("graph6 parse error at byte offset {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },
    #[error("edge list parse error on line {line}: {reason}")]
    EdgeList { line: usize, reason: String },
    #[error("invalid family specification: {0}")]
    Family(String),
}

/// Iterates the indices of set bits, lowest first.
#[inline]
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

#[inline]
pub(crate) const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Immutable simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_ORDER {
            return Err(GraphError::Order(n));
        }
        Ok(Self { n, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::new(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from raw neighbor masks, validating all invariants.
    pub fn from_adjacency(adj: Vec<u64>) -> Result<Self, GraphError> {
        let n = adj.len();
        if n == 0 || n > MAX_ORDER {
            return Err(GraphError::Order(n));
        }
        let all = low_mask(n);
        for (u, &row) in adj.iter().enumerate() {
            if row & !all != 0 {
                let vertex = (row & !all).trailing_zeros() as usize;
                return Err(GraphError::VertexOutOfRange { vertex, order: n });
            }
            if row >> u & 1 == 1 {
                return Err(GraphError::SelfLoop(u));
            }
            for v in bits(row) {
                if adj[v] >> u & 1 == 0 {
                    return Err(GraphError::Asymmetric(u, v));
                }
            }
        }
        Ok(Self { n, adj })
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange { vertex: v, order: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// Neighbor mask of `v`.
    #[inline]
    pub fn adj(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Mask with one bit per vertex.
    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        low_mask(self.n)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| bits(self.adj[u] >> u >> 1).map(move |d| (u, u + 1 + d)))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> {
        bits(self.adj[v])
    }

    /// Number of unordered non-adjacent vertex pairs, `C(n,2) - |E|`.
    pub fn count_non_edges(&self) -> usize {
        self.n * (self.n - 1) / 2 - self.edge_count()
    }

    pub fn complement(&self) -> Graph {
        let all = self.vertex_mask();
        let adj = (0..self.n).map(|v| !self.adj[v] & all & !(1 << v)).collect();
        Graph { n: self.n, adj }
    }

    /// Subgraph induced by the vertices in `mask`, relabeled in increasing order.
    ///
    /// Panics if `mask` is empty or names vertices outside the graph.
    pub fn induced(&self, mask: u64) -> Graph {
        assert!(mask != 0 && mask & !self.vertex_mask() == 0, "invalid vertex mask");
        let verts: Vec<usize> = bits(mask).collect();
        self.relabel(&verts)
    }

    /// Graph whose vertex `i` is vertex `order[i]` of `self`. `order` must be
    /// a list of distinct vertices; it need not cover the whole graph.
    pub fn relabel(&self, order: &[usize]) -> Graph {
        let k = order.len();
        let mut adj = vec![0u64; k];
        for i in 0..k {
            for j in (i + 1)..k {
                if self.has_edge(order[i], order[j]) {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
        }
        Graph { n: k, adj }
    }

    /// Copy with one extra vertex adjacent to the vertices in `nbrs`.
    pub fn with_vertex(&self, nbrs: u64) -> Result<Graph, GraphError> {
        if self.n == MAX_ORDER {
            return Err(GraphError::Order(self.n + 1));
        }
        if nbrs & !self.vertex_mask() != 0 {
            let vertex = (nbrs & !self.vertex_mask()).trailing_zeros() as usize;
            return Err(GraphError::VertexOutOfRange { vertex, order: self.n });
        }
        let mut adj = self.adj.clone();
        let new = self.n;
        for v in bits(nbrs) {
            adj[v] |= 1 << new;
        }
        adj.push(nbrs);
        Ok(Graph { n: self.n + 1, adj })
    }

    pub fn is_independent(&self, mask: u64) -> bool {
        bits(mask).all(|v| self.adj[v] & mask == 0)
    }

    pub fn is_clique(&self, mask: u64) -> bool {
        bits(mask).all(|v| (self.adj[v] | 1 << v) & mask == mask)
    }

    /// Connected components as vertex masks, ordered by lowest vertex.
    pub fn components(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut comps = Vec::new();
        for v in 0..self.n {
            if seen >> v & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << v;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0;
                for u in bits(frontier) {
                    next |= self.adj[u];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            comps.push(comp);
        }
        comps
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self.edges().collect();
        write!(f, "Graph(n={}, edges={:?})", self.n, edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_graph6(self))
    }
}

impl std::str::FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_graph6(s)
    }
}
