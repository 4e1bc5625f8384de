//! Replication graphs and the two explicit witness constructions.
//!
//! A replication graph of a base graph replaces base vertex `i` by a clique
//! of `sizes[i]` vertices; two cliques are completely joined when their base
//! vertices are adjacent and completely non-adjacent otherwise.

use thiserror::Error;

use crate::graph::{bits, Graph, GraphError, MAX_ORDER};

/// Block permutations are only searched exhaustively up to this many blocks.
pub const EXHAUSTIVE_BLOCK_LIMIT: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("size vector has {got} entries but the base graph has {expected} vertices")]
    SizeLength { expected: usize, got: usize },
    #[error("clique size for base vertex {0} must be positive")]
    ZeroSize(usize),
    #[error("replication graph would have {0} vertices (limit 64)")]
    Overflow(usize),
    #[error("demand {demand} exceeds clique size {size} at block {block}")]
    DemandExceedsSize { block: usize, demand: usize, size: usize },
    #[error("not a permutation of 0..{0}: {1:?}")]
    InvalidPermutation(usize, Vec<usize>),
    #[error("exhaustive block ordering supports at most {limit} blocks, graph has {blocks}")]
    TooManyBlocks { blocks: usize, limit: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A base graph, a clique size per base vertex, and the expanded graph.
///
/// `demand[i]` is how many vertices block `i` contributes to a transversal
/// copy of the target. It is 1 for ordinary replication graphs, where the
/// target is the base itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplicationStructure {
    base: Graph,
    sizes: Vec<usize>,
    demand: Vec<usize>,
    expanded: Graph,
    clique_of: Vec<usize>,
}

impl ReplicationStructure {
    pub fn new(base: &Graph, sizes: &[usize]) -> Result<Self, ConstructionError> {
        Self::with_demand(base, sizes, &vec![1; base.order()])
    }

    pub fn with_demand(base: &Graph, sizes: &[usize], demand: &[usize]) -> Result<Self, ConstructionError> {
        let n = base.order();
        for v in [sizes.len(), demand.len()] {
            if v != n {
                return Err(ConstructionError::SizeLength { expected: n, got: v });
            }
        }
        if let Some(i) = sizes.iter().position(|&s| s == 0) {
            return Err(ConstructionError::ZeroSize(i));
        }
        if let Some(i) = (0..n).find(|&i| demand[i] == 0 || demand[i] > sizes[i]) {
            return Err(ConstructionError::DemandExceedsSize { block: i, demand: demand[i], size: sizes[i] });
        }
        let total: usize = sizes.iter().sum();
        if total > MAX_ORDER {
            return Err(ConstructionError::Overflow(total));
        }

        let mut clique_of = Vec::with_capacity(total);
        let mut masks = Vec::with_capacity(n);
        for (i, &s) in sizes.iter().enumerate() {
            let start = clique_of.len();
            clique_of.extend(std::iter::repeat_n(i, s));
            masks.push(((1u64 << s) - 1) << start);
        }
        let adj = (0..total)
            .map(|v| {
                let b = clique_of[v];
                let mut row = masks[b] & !(1 << v);
                for c in bits(base.adj(b)) {
                    row |= masks[c];
                }
                row
            })
            .collect();
        let expanded = Graph::from_adjacency(adj)?;
        Ok(Self { base: base.clone(), sizes: sizes.to_vec(), demand: demand.to_vec(), expanded, clique_of })
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn demand(&self) -> &[usize] {
        &self.demand
    }

    pub fn expanded(&self) -> &Graph {
        &self.expanded
    }

    /// Base vertex whose clique contains expanded vertex `v`.
    pub fn clique_of(&self, v: usize) -> usize {
        self.clique_of[v]
    }

    pub fn clique_map(&self) -> &[usize] {
        &self.clique_of
    }

    pub fn block_count(&self) -> usize {
        self.sizes.len()
    }

    /// Expanded vertices of block `i`.
    pub fn block_mask(&self, i: usize) -> u64 {
        let start: usize = self.sizes[..i].iter().sum();
        ((1u64 << self.sizes[i]) - 1) << start
    }

    /// Order of the graph a transversal induces (sum of demands).
    pub fn target_order(&self) -> usize {
        self.demand.iter().sum()
    }
}

/// Replication graph of `h` with the given clique sizes, written `h(a_1,...,a_n)`.
pub fn replication_graph(h: &Graph, sizes: &[usize]) -> Result<ReplicationStructure, ConstructionError> {
    ReplicationStructure::new(h, sizes)
}

fn check_permutation(n: usize, perm: &[usize]) -> Result<(), ConstructionError> {
    let mut seen = 0u64;
    for &p in perm {
        if p >= n || seen >> p & 1 == 1 {
            return Err(ConstructionError::InvalidPermutation(n, perm.to_vec()));
        }
        seen |= 1 << p;
    }
    if perm.len() != n {
        return Err(ConstructionError::InvalidPermutation(n, perm.to_vec()));
    }
    Ok(())
}

/// The non-edge clique construction: processing vertices in `vertex_order`
/// (input order when `None`), vertex `h_i` gets a clique of size one more
/// than its number of non-neighbors among `h_1..h_{i-1}`.
///
/// The expanded graph always has `|h| + m'(h)` vertices and arrows `h`.
pub fn nonedge_construction(
    h: &Graph,
    vertex_order: Option<&[usize]>,
) -> Result<ReplicationStructure, ConstructionError> {
    let n = h.order();
    let identity: Vec<usize> = (0..n).collect();
    let order = vertex_order.unwrap_or(&identity);
    check_permutation(n, order)?;
    let mut sizes = vec![0; n];
    let mut earlier = 0u64;
    for &v in order {
        sizes[v] = 1 + (earlier & !h.adj(v)).count_ones() as usize;
        earlier |= 1 << v;
    }
    replication_graph(h, &sizes)
}

/// Replication cliques: classes of `x ~ y` iff `x = y` or `x, y` are adjacent
/// with the same neighbors outside `{x, y}` (equal closed neighborhoods).
/// Blocks are sorted by smallest vertex; each block lists vertices ascending.
pub fn replication_cliques(h: &Graph) -> Vec<Vec<usize>> {
    let n = h.order();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut key: Vec<u64> = Vec::new();
    for v in 0..n {
        let closed = h.adj(v) | 1 << v;
        match key.iter().position(|&k| k == closed) {
            Some(i) => blocks[i].push(v),
            None => {
                key.push(closed);
                blocks.push(vec![v]);
            }
        }
    }
    blocks
}

/// Graph with one vertex per block; blocks are joined iff their vertices are.
fn quotient(h: &Graph, blocks: &[Vec<usize>]) -> Graph {
    let s = blocks.len();
    let edges: Vec<(usize, usize)> = (0..s)
        .flat_map(|i| (i + 1..s).map(move |j| (i, j)))
        .filter(|&(i, j)| h.has_edge(blocks[i][0], blocks[j][0]))
        .collect();
    Graph::from_edges(s, &edges).expect("quotient of a valid graph")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockOrdering {
    /// Nondecreasing block size, ties by lowest original vertex.
    IncreasingSize,
    /// Explicit permutation of the blocks (indices into `replication_cliques`).
    Explicit(Vec<usize>),
    /// Minimum total over all block permutations; ties go to the
    /// lexicographically least permutation.
    Exhaustive,
}

/// Result of the replication-clique construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueReplication {
    /// Replication cliques of `h`; block `i` is quotient vertex `i`.
    pub blocks: Vec<Vec<usize>>,
    /// Order in which blocks were processed.
    pub order: Vec<usize>,
    /// `extra[i]`: non-edges between one vertex of block `i` and the blocks
    /// processed before it.
    pub extra: Vec<usize>,
    /// Replication of the quotient with sizes `|block_i| + extra[i]` and
    /// demand `|block_i|`.
    pub structure: ReplicationStructure,
}

impl CliqueReplication {
    /// Clique sizes listed in processing order.
    pub fn sizes_in_order(&self) -> Vec<usize> {
        self.order.iter().map(|&b| self.structure.sizes()[b]).collect()
    }

    /// Total order of the expanded graph, `n + sum(extra)`.
    pub fn total(&self) -> usize {
        self.structure.expanded().order()
    }

    /// Maps a transversal (expanded vertices, any order) to an embedding of
    /// the original graph: `result[x]` is the expanded vertex used for `x`.
    /// Vertices of each block are assigned in ascending order.
    pub fn embedding_from(&self, chosen: &[usize]) -> Option<Vec<usize>> {
        let n: usize = self.blocks.iter().map(|b| b.len()).sum();
        let mut per_block: Vec<Vec<usize>> = vec![Vec::new(); self.blocks.len()];
        for &v in chosen {
            per_block[self.structure.clique_of(v)].push(v);
        }
        let mut out = vec![usize::MAX; n];
        for (b, picked) in per_block.iter_mut().enumerate() {
            if picked.len() != self.blocks[b].len() {
                return None;
            }
            picked.sort_unstable();
            for (&x, &v) in self.blocks[b].iter().zip(picked.iter()) {
                out[x] = v;
            }
        }
        Some(out)
    }
}

fn extra_for_order(m: &Graph, y: &[usize], order: &[usize]) -> Vec<usize> {
    let mut extra = vec![0; y.len()];
    for (p, &b) in order.iter().enumerate() {
        extra[b] = order[..p].iter().filter(|&&c| !m.has_edge(b, c)).map(|&c| y[c]).sum();
    }
    extra
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// The replication-clique construction: each replication clique of size
/// `y_i` becomes a clique of size `y_i + n_i`, where `n_i` counts non-edges
/// from one of its vertices to the blocks processed earlier.
pub fn replication_clique_construction(
    h: &Graph,
    ordering: &BlockOrdering,
) -> Result<CliqueReplication, ConstructionError> {
    let blocks = replication_cliques(h);
    let s = blocks.len();
    let m = quotient(h, &blocks);
    let y: Vec<usize> = blocks.iter().map(|b| b.len()).collect();

    let order = match ordering {
        BlockOrdering::IncreasingSize => {
            let mut o: Vec<usize> = (0..s).collect();
            o.sort_by_key(|&b| (y[b], blocks[b][0]));
            o
        }
        BlockOrdering::Explicit(p) => {
            check_permutation(s, p)?;
            p.clone()
        }
        BlockOrdering::Exhaustive => {
            if s > EXHAUSTIVE_BLOCK_LIMIT {
                return Err(ConstructionError::TooManyBlocks { blocks: s, limit: EXHAUSTIVE_BLOCK_LIMIT });
            }
            let mut p: Vec<usize> = (0..s).collect();
            let mut best = (usize::MAX, p.clone());
            loop {
                let total: usize = extra_for_order(&m, &y, &p).iter().sum();
                if total < best.0 {
                    best = (total, p.clone());
                }
                if !next_permutation(&mut p) {
                    break;
                }
            }
            best.1
        }
    };

    let extra = extra_for_order(&m, &y, &order);
    let sizes: Vec<usize> = (0..s).map(|i| y[i] + extra[i]).collect();
    let structure = ReplicationStructure::with_demand(&m, &sizes, &y)?;
    Ok(CliqueReplication { blocks, order, extra, structure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{anticlique, clique, disjoint_cliques, is_isomorphic, path, star};

    fn fig1_graph() -> Graph {
        // 1-indexed edges 12, 23, 24, 45, 15, 25
        Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4), (0, 4), (1, 4)]).unwrap()
    }

    fn check_invariants(r: &ReplicationStructure) {
        let g = r.expanded();
        assert_eq!(g.order(), r.sizes().iter().sum::<usize>());
        for i in 0..r.block_count() {
            let bi = r.block_mask(i);
            assert_eq!(bi.count_ones() as usize, r.sizes()[i]);
            assert!(g.is_clique(bi));
            for j in 0..r.block_count() {
                if i == j {
                    continue;
                }
                let bj = r.block_mask(j);
                for v in bits(bi) {
                    let expect = if r.base().has_edge(i, j) { bj } else { 0 };
                    assert_eq!(g.adj(v) & bj, expect);
                }
            }
        }
        for v in 0..g.order() {
            assert!(r.block_mask(r.clique_of(v)) >> v & 1 == 1);
        }
    }

    #[test]
    fn replication_examples() {
        let r = replication_graph(&path(5).unwrap(), &[1, 2, 2, 2, 3]).unwrap();
        check_invariants(&r);
        assert_eq!(r.expanded().order(), 10);
        // 6 edges inside the cliques, 2 + 4 + 4 + 6 between them
        assert_eq!(r.expanded().edge_count(), 22);

        let p4 = path(4).unwrap();
        assert_eq!(replication_graph(&p4, &[1; 4]).unwrap().expanded(), &p4);
        assert_eq!(replication_graph(&clique(2).unwrap(), &[2, 2]).unwrap().expanded(), &clique(4).unwrap());
    }

    #[test]
    fn replication_errors() {
        let p3 = path(3).unwrap();
        assert_eq!(
            replication_graph(&p3, &[1, 1]),
            Err(ConstructionError::SizeLength { expected: 3, got: 2 })
        );
        assert_eq!(replication_graph(&p3, &[1, 0, 1]), Err(ConstructionError::ZeroSize(1)));
        assert_eq!(replication_graph(&p3, &[30, 30, 5]), Err(ConstructionError::Overflow(65)));
    }

    #[test]
    fn nonedge_construction_examples() {
        let r = nonedge_construction(&fig1_graph(), None).unwrap();
        assert_eq!(r.sizes(), &[1, 1, 2, 3, 2]);
        assert_eq!(r.expanded().order(), 9);
        check_invariants(&r);

        let k = nonedge_construction(&clique(5).unwrap(), None).unwrap();
        assert_eq!(k.sizes(), &[1; 5]);

        let a = nonedge_construction(&anticlique(3).unwrap(), None).unwrap();
        assert_eq!(a.sizes(), &[1, 2, 3]);
        assert_eq!(a.expanded().order(), 6);

        assert!(matches!(
            nonedge_construction(&path(3).unwrap(), Some(&[0, 0, 1])),
            Err(ConstructionError::InvalidPermutation(3, _))
        ));
    }

    #[test]
    fn nonedge_construction_order_is_invariant() {
        let h = fig1_graph();
        let want = h.order() + h.count_non_edges();
        let mut p: Vec<usize> = (0..5).collect();
        loop {
            assert_eq!(nonedge_construction(&h, Some(&p)).unwrap().expanded().order(), want);
            if !next_permutation(&mut p) {
                break;
            }
        }
    }

    #[test]
    fn replication_clique_examples() {
        assert_eq!(replication_cliques(&clique(4).unwrap()), vec![vec![0, 1, 2, 3]]);
        assert_eq!(replication_cliques(&path(4).unwrap()), vec![vec![0], vec![1], vec![2], vec![3]]);
        let r = replication_graph(&path(5).unwrap(), &[1, 2, 2, 2, 3]).unwrap();
        let mut sizes: Vec<usize> = replication_cliques(r.expanded()).iter().map(|b| b.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 2, 2, 3]);
    }

    #[test]
    fn clique_construction_examples() {
        let c = replication_clique_construction(&disjoint_cliques(&[2, 2]).unwrap(), &BlockOrdering::IncreasingSize)
            .unwrap();
        assert_eq!(c.sizes_in_order(), vec![2, 4]);
        assert_eq!(c.extra, vec![0, 2]);
        assert_eq!(c.total(), 6);

        let k = replication_clique_construction(&clique(4).unwrap(), &BlockOrdering::IncreasingSize).unwrap();
        assert_eq!(k.total(), 4);
        assert!(is_isomorphic(k.structure.expanded(), &clique(4).unwrap()));

        // Star with center 0: leaves first, then the center.
        let s = replication_clique_construction(&star(4).unwrap(), &BlockOrdering::Explicit(vec![1, 2, 3, 0])).unwrap();
        assert_eq!(s.sizes_in_order(), vec![1, 2, 3, 1]);
        assert_eq!(s.total(), 7);
        let e = replication_clique_construction(&star(4).unwrap(), &BlockOrdering::Exhaustive).unwrap();
        assert_eq!(e.total(), 7);
    }

    #[test]
    fn exhaustive_ordering_never_worse() {
        let h = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (4, 5), (3, 4)]).unwrap();
        let inc = replication_clique_construction(&h, &BlockOrdering::IncreasingSize).unwrap();
        let ex = replication_clique_construction(&h, &BlockOrdering::Exhaustive).unwrap();
        assert!(ex.total() <= inc.total());
        assert!(matches!(
            replication_clique_construction(&anticlique(9).unwrap(), &BlockOrdering::Exhaustive),
            Err(ConstructionError::TooManyBlocks { blocks: 9, limit: 8 })
        ));
    }

    #[test]
    fn embedding_maps_blocks_back() {
        let h = disjoint_cliques(&[2, 1]).unwrap();
        let c = replication_clique_construction(&h, &BlockOrdering::IncreasingSize).unwrap();
        // Blocks: {0,1} and {2}; order: {2} first, then {0,1} gets 2 + 1 vertices.
        assert_eq!(c.order, vec![1, 0]);
        let emb = c.embedding_from(&[0, 2, 3]).unwrap();
        assert_eq!(emb, vec![0, 2, 3]);
        let sub = c.structure.expanded().relabel(&emb);
        assert_eq!(sub, h);
        assert!(c.embedding_from(&[0, 1, 2]).is_none());
    }
}
