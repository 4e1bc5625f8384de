//! Closed-form bounds and exact values for the rainbow number.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{
    replication_clique_construction, replication_cliques, BlockOrdering, ConstructionError,
    EXHAUSTIVE_BLOCK_LIMIT,
};
use crate::graph::{
    bits, canonical_form, chromatic_number, complete_multipartite, disjoint_cliques, path, Graph,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("partition block {0:?} is not an independent set")]
    NotIndependent(Vec<usize>),
    #[error("partition does not cover every vertex exactly once")]
    NotAPartition,
    #[error("path bound needs n >= 2, got {0}")]
    PathTooShort(usize),
    #[error("cross edge ({0}, {1}) is out of range")]
    CrossEdge(usize, usize),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// Lower and upper bounds from the chromatic number and non-edge count:
/// `k(n - chi(k-1)/2) <= rho <= n + m'` with `k = ceil(n/chi)`.
///
/// The lower expression equals `k*n - chi*k(k-1)/2`, which is always an
/// integer.
pub fn chromatic_bounds(h: &Graph) -> (usize, usize) {
    let n = h.order();
    let chi = chromatic_number(h);
    let k = n.div_ceil(chi);
    (k * n - chi * k * (k - 1) / 2, n + h.count_non_edges())
}

/// The simpler `(n/2)(n/chi + 1)` lower bound, rounded up.
pub fn weak_lower_bound(h: &Graph) -> usize {
    let n = h.order();
    let chi = chromatic_number(h);
    (n * (n + chi)).div_ceil(2 * chi)
}

fn triangle(x: usize) -> usize {
    x * (x + 1) / 2
}

/// `sum x_i(x_i+1)/2` over a partition of `h` into anticliques.
///
/// With `partition = None` the maximum over all such partitions is found by
/// branch and bound; the returned partition attains it. Blocks are listed by
/// smallest vertex, each sorted ascending.
pub fn anticlique_partition_bound(
    h: &Graph,
    partition: Option<&[Vec<usize>]>,
) -> Result<(usize, Vec<Vec<usize>>), BoundsError> {
    if let Some(p) = partition {
        let mut seen = 0u64;
        for block in p {
            let mut mask = 0u64;
            for &v in block {
                if v >= h.order() || (seen | mask) >> v & 1 == 1 {
                    return Err(BoundsError::NotAPartition);
                }
                mask |= 1 << v;
            }
            if !h.is_independent(mask) {
                return Err(BoundsError::NotIndependent(block.clone()));
            }
            seen |= mask;
        }
        if seen != h.vertex_mask() {
            return Err(BoundsError::NotAPartition);
        }
        let mut blocks: Vec<Vec<usize>> = p.iter().filter(|b| !b.is_empty()).cloned().collect();
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        return Ok((blocks.iter().map(|b| triangle(b.len())).sum(), blocks));
    }
    let masks = max_anticlique_partition(h);
    let blocks: Vec<Vec<usize>> = masks.iter().map(|&m| bits(m).collect()).collect();
    Ok((blocks.iter().map(|b| triangle(b.len())).sum(), blocks))
}

struct PartitionSearch<'a> {
    h: &'a Graph,
    // suffix[v]: best possible gain from vertices v.. (each joins a block
    // holding all of its earlier non-neighbors)
    suffix: Vec<usize>,
    blocks: Vec<u64>,
    best: usize,
    best_blocks: Vec<u64>,
}

impl PartitionSearch<'_> {
    fn run(&mut self, v: usize, value: usize) {
        let n = self.h.order();
        if v == n {
            if value > self.best {
                self.best = value;
                self.best_blocks.clone_from(&self.blocks);
            }
            return;
        }
        if value + self.suffix[v] <= self.best {
            return;
        }
        let mut order: Vec<usize> =
            (0..self.blocks.len()).filter(|&i| self.blocks[i] & self.h.adj(v) == 0).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.blocks[i].count_ones()));
        for i in order {
            let gain = self.blocks[i].count_ones() as usize + 1;
            self.blocks[i] |= 1 << v;
            self.run(v + 1, value + gain);
            self.blocks[i] &= !(1 << v);
        }
        self.blocks.push(1 << v);
        self.run(v + 1, value + 1);
        self.blocks.pop();
    }
}

fn max_anticlique_partition(h: &Graph) -> Vec<u64> {
    let n = h.order();
    let mut suffix = vec![0; n + 1];
    for v in (0..n).rev() {
        let earlier = (1u64 << v) - 1;
        suffix[v] = suffix[v + 1] + 1 + (earlier & !h.adj(v)).count_ones() as usize;
    }
    let mut s = PartitionSearch { h, suffix, blocks: Vec::new(), best: 0, best_blocks: Vec::new() };
    s.run(0, 0);
    let mut out = s.best_blocks;
    out.sort_by_key(|m| m.trailing_zeros());
    out
}

/// Order of the replication-clique construction for `h`: `n + sum n_i`.
pub fn replication_upper_bound(h: &Graph, ordering: &BlockOrdering) -> Result<usize, BoundsError> {
    Ok(replication_clique_construction(h, ordering)?.total())
}

/// Upper bound for paths:
/// `1 + n(n-1)/2 - 3 floor(n/7)`, less 2 when `n mod 7 = 6` and 1 when it is 5.
pub fn path_upper_bound(n: usize) -> Result<usize, BoundsError> {
    if n < 2 {
        return Err(BoundsError::PathTooShort(n));
    }
    let adjust = match n % 7 {
        6 => 2,
        5 => 1,
        _ => 0,
    };
    Ok(1 + n * (n - 1) / 2 - 3 * (n / 7) - adjust)
}

/// Bounds for the replication number of a graph built from `h1` and `h2` by
/// adding `cross` edges, given the replication numbers `v1`, `v2` of the parts.
/// Cross edges are pairs `(a, b)` with `a` in `h1` and `b` in `h2`.
pub fn rho_r_composition(
    v1: usize,
    v2: usize,
    h1: &Graph,
    h2: &Graph,
    cross: &[(usize, usize)],
) -> Result<(usize, usize), BoundsError> {
    let mut seen = vec![0u64; h1.order()];
    for &(a, b) in cross {
        if a >= h1.order() || b >= h2.order() {
            return Err(BoundsError::CrossEdge(a, b));
        }
        seen[a] |= 1 << b;
    }
    let present: usize = seen.iter().map(|m| m.count_ones() as usize).sum();
    let missing = h1.order() * h2.order() - present;
    Ok((v1 + v2, v1 + v2 + missing))
}

/// Class sizes if `h` is complete multipartite (non-adjacency is an
/// equivalence relation), largest first.
fn multipartite_classes(h: &Graph) -> Option<Vec<usize>> {
    let comp = h.complement();
    let mut sizes = Vec::new();
    for c in comp.components() {
        if !comp.is_clique(c) {
            return None;
        }
        sizes.push(c.count_ones() as usize);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Some(sizes)
}

/// Clique sizes if every component of `h` is a clique, largest first.
fn clique_components(h: &Graph) -> Option<Vec<usize>> {
    let mut sizes = Vec::new();
    for c in h.components() {
        if !h.is_clique(c) {
            return None;
        }
        sizes.push(c.count_ones() as usize);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Some(sizes)
}

/// Whether `h` is complete multipartite with class sizes differing by at most one.
pub fn is_turan(h: &Graph) -> bool {
    multipartite_classes(h).is_some_and(|s| s[0] - s[s.len() - 1] <= 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyTag {
    Clique,
    Anticlique,
    Star,
    Turan,
    CompleteMultipartite,
    DisjointCliques,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Clique => "clique",
            Self::Anticlique => "anticlique",
            Self::Star => "star",
            Self::Turan => "turan",
            Self::CompleteMultipartite => "complete-multipartite",
            Self::DisjointCliques => "disjoint-cliques",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    pub value: usize,
    pub family: FamilyTag,
}

/// Value of the Turán formula `ceil(n/r)(n+s)/2`, where `n = kr + s` with
/// `0 < s <= r` and `s` is the number of larger classes.
pub fn turan_value(n: usize, r: usize) -> usize {
    let big = n.div_ceil(r);
    let s = n - (big - 1) * r;
    big * (n + s) / 2
}

/// Exact rainbow number when `h` is, up to isomorphism, a clique, an
/// anticlique, a complete multipartite graph or a disjoint union of cliques.
pub fn exact_formula(h: &Graph) -> Option<ExactValue> {
    let n = h.order();
    let same = |g: Graph| canonical_form(&g) == canonical_form(h);
    let found = |value, family| Some(ExactValue { value, family });

    if h.edge_count() == n * (n - 1) / 2 {
        return found(n, FamilyTag::Clique);
    }
    if h.edge_count() == 0 {
        return found(triangle(n), FamilyTag::Anticlique);
    }
    if let Some(classes) = multipartite_classes(h) {
        debug_assert!(same(complete_multipartite(&classes).expect("classes from a valid graph")));
        if classes.len() == 2 && classes[1] == 1 {
            return found(n * (n - 1) / 2 + 1, FamilyTag::Star);
        }
        if is_turan(h) {
            return found(turan_value(n, classes.len()), FamilyTag::Turan);
        }
        return found(classes.iter().map(|&x| triangle(x)).sum(), FamilyTag::CompleteMultipartite);
    }
    if let Some(y) = clique_components(h) {
        debug_assert!(same(disjoint_cliques(&y).expect("sizes from a valid graph")));
        return found(y.iter().enumerate().map(|(i, &s)| (i + 1) * s).sum(), FamilyTag::DisjointCliques);
    }
    None
}

fn is_path(h: &Graph) -> bool {
    let n = h.order();
    n >= 2
        && h.edge_count() == n - 1
        && (0..n).all(|v| h.degree(v) <= 2)
        && h.components().len() == 1
        && canonical_form(h) == canonical_form(&path(n).expect("order in range"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub chi: usize,
    pub m_prime: usize,
    #[serde(rename = "eq1_lower")]
    pub chromatic_lower: usize,
    #[serde(rename = "eq1_upper")]
    pub nonedge_upper: usize,
    pub weak_lower: usize,
    #[serde(rename = "eq3")]
    pub partition_lower: usize,
    #[serde(rename = "eq3_partition")]
    pub partition: Vec<Vec<usize>>,
    #[serde(rename = "eq4")]
    pub replication_upper: usize,
    /// Replication cliques of `h` in the processing order that gave `replication_upper`.
    #[serde(rename = "eq4_block_order")]
    pub block_order: Vec<Vec<usize>>,
    pub exact: Option<ExactValue>,
    pub path_upper: Option<usize>,
}

impl BoundsReport {
    pub fn best_lower(&self) -> usize {
        self.chromatic_lower.max(self.weak_lower).max(self.partition_lower)
    }

    pub fn best_upper(&self) -> usize {
        let u = self.nonedge_upper.min(self.replication_upper);
        self.path_upper.map_or(u, |p| u.min(p))
    }
}

/// Every bound that applies to `h`.
pub fn bounds_report(h: &Graph) -> BoundsReport {
    let (chromatic_lower, nonedge_upper) = chromatic_bounds(h);
    let (partition_lower, partition) =
        anticlique_partition_bound(h, None).expect("optimizer needs no partition");
    let ordering = if replication_cliques(h).len() <= EXHAUSTIVE_BLOCK_LIMIT {
        BlockOrdering::Exhaustive
    } else {
        BlockOrdering::IncreasingSize
    };
    let rep = replication_clique_construction(h, &ordering).expect("ordering fits the block count");
    BoundsReport {
        n: h.order(),
        chi: chromatic_number(h),
        m_prime: h.count_non_edges(),
        chromatic_lower,
        nonedge_upper,
        weak_lower: weak_lower_bound(h),
        partition_lower,
        partition,
        replication_upper: rep.total(),
        block_order: rep.order.iter().map(|&b| rep.blocks[b].clone()).collect(),
        exact: exact_formula(h),
        path_upper: if is_path(h) { Some(path_upper_bound(h.order()).expect("n >= 2")) } else { None },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{anticlique, clique, cycle, join, star, turan};
    use proptest::prelude::*;

    /// Every set partition of `0..n` as block masks, by restricted growth strings.
    fn set_partitions(n: usize) -> Vec<Vec<u64>> {
        fn rec(v: usize, n: usize, blocks: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if v == n {
                out.push(blocks.clone());
                return;
            }
            for i in 0..blocks.len() {
                blocks[i] |= 1 << v;
                rec(v + 1, n, blocks, out);
                blocks[i] &= !(1 << v);
            }
            blocks.push(1 << v);
            rec(v + 1, n, blocks, out);
            blocks.pop();
        }
        let mut out = Vec::new();
        rec(0, n, &mut Vec::new(), &mut out);
        out
    }

    fn brute_partition_bound(h: &Graph) -> usize {
        set_partitions(h.order())
            .iter()
            .filter(|p| p.iter().all(|&b| h.is_independent(b)))
            .map(|p| p.iter().map(|b| triangle(b.count_ones() as usize)).sum())
            .max()
            .unwrap()
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |flags| {
                let pairs = (1..n).flat_map(|j| (0..j).map(move |i| (i, j)));
                let edges: Vec<_> = pairs.zip(flags).filter(|(_, f)| *f).map(|(p, _)| p).collect();
                Graph::from_edges(n, &edges).unwrap()
            })
        })
    }

    #[test]
    fn chromatic_bounds_for_paths() {
        let want = [(4, (6, 7)), (5, (9, 11)), (6, (12, 16)), (7, (16, 22))];
        for (n, b) in want {
            assert_eq!(chromatic_bounds(&path(n).unwrap()), b, "P_{n}");
        }
        for n in 1..=8 {
            assert_eq!(chromatic_bounds(&clique(n).unwrap()), (n, n));
        }
    }

    #[test]
    fn partition_bound_examples() {
        let s = star(5).unwrap();
        let (v, _) = anticlique_partition_bound(&s, Some(&[vec![1, 2, 3, 4], vec![0]])).unwrap();
        assert_eq!(v, 5 * 4 / 2 + 1);
        let p4 = path(4).unwrap();
        let singles: Vec<Vec<usize>> = (0..4).map(|v| vec![v]).collect();
        assert_eq!(anticlique_partition_bound(&p4, Some(&singles)).unwrap().0, 4);
        assert_eq!(anticlique_partition_bound(&p4, None).unwrap(), (6, vec![vec![0, 2], vec![1, 3]]));
        assert_eq!(
            anticlique_partition_bound(&p4, Some(&[vec![0, 1], vec![2, 3]])),
            Err(BoundsError::NotIndependent(vec![0, 1]))
        );
        assert_eq!(anticlique_partition_bound(&p4, Some(&[vec![0, 2]])), Err(BoundsError::NotAPartition));
    }

    #[test]
    fn replication_bound_examples() {
        for n in 1..=5 {
            let two = disjoint_cliques(&[n, n]).unwrap();
            assert_eq!(replication_upper_bound(&two, &BlockOrdering::IncreasingSize).unwrap(), 3 * n);
            assert_eq!(replication_upper_bound(&clique(n).unwrap(), &BlockOrdering::IncreasingSize).unwrap(), n);
        }
        assert_eq!(replication_upper_bound(&star(4).unwrap(), &BlockOrdering::Exhaustive).unwrap(), 7);
    }

    #[test]
    fn exact_formula_examples() {
        let k22 = complete_multipartite(&[2, 2]).unwrap();
        assert_eq!(exact_formula(&k22), Some(ExactValue { value: 6, family: FamilyTag::Turan }));
        assert_eq!(exact_formula(&anticlique(4).unwrap()).unwrap().value, 10);
        let mixed = disjoint_cliques(&[1, 3, 2]).unwrap();
        assert_eq!(exact_formula(&mixed), Some(ExactValue { value: 10, family: FamilyTag::DisjointCliques }));
        assert_eq!(exact_formula(&star(4).unwrap()), Some(ExactValue { value: 7, family: FamilyTag::Star }));
        let k123 = complete_multipartite(&[1, 2, 3]).unwrap();
        assert_eq!(exact_formula(&k123).unwrap(), ExactValue { value: 1 + 3 + 6, family: FamilyTag::CompleteMultipartite });
        assert_eq!(exact_formula(&path(4).unwrap()), None);
        assert_eq!(exact_formula(&cycle(5).unwrap()), None);
    }

    #[test]
    fn path_bound_values() {
        let want = [(5, 10), (6, 14), (7, 19), (12, 63), (14, 86)];
        for (n, v) in want {
            assert_eq!(path_upper_bound(n).unwrap(), v, "n = {n}");
        }
        assert_eq!(path_upper_bound(1), Err(BoundsError::PathTooShort(1)));
    }

    #[test]
    fn composition_examples() {
        let k1 = clique(1).unwrap();
        let rest = disjoint_cliques(&[2, 1]).unwrap();
        // P_4 = K_1 joined to one end of K_2 and to K_1.
        assert_eq!(rho_r_composition(1, 4, &k1, &rest, &[(0, 1), (0, 2)]).unwrap(), (5, 6));
        let a = anticlique(2).unwrap();
        assert_eq!(rho_r_composition(3, 3, &a, &a, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap(), (6, 6));
        assert_eq!(rho_r_composition(3, 3, &a, &a, &[]).unwrap(), (6, 10));
        assert_eq!(rho_r_composition(1, 1, &a, &a, &[(2, 0)]), Err(BoundsError::CrossEdge(2, 0)));
    }

    #[test]
    fn turan_recognition() {
        assert!(is_turan(&complete_multipartite(&[2, 2]).unwrap()));
        assert!(!is_turan(&path(4).unwrap()));
        assert!(!is_turan(&star(4).unwrap()));
        assert!(is_turan(&clique(3).unwrap()));
        assert!(is_turan(&anticlique(3).unwrap()));
    }

    #[test]
    fn turan_formula_consistency() {
        for n in 1..=12 {
            for r in 1..=n {
                let t = turan(n, r).unwrap();
                let (lo, hi) = chromatic_bounds(&t);
                let exact = exact_formula(&t).unwrap().value;
                assert_eq!((lo, hi), (exact, exact), "T({n},{r})");
                assert_eq!(turan_value(n, r), exact);
            }
        }
    }

    #[test]
    fn report_examples() {
        let r = bounds_report(&path(6).unwrap());
        assert_eq!((r.chromatic_lower, r.nonedge_upper), (12, 16));
        assert_eq!(r.path_upper, Some(14));
        let r = bounds_report(&path(7).unwrap());
        assert_eq!((r.chromatic_lower, r.nonedge_upper), (16, 22));
        let r = bounds_report(&clique(1).unwrap());
        assert_eq!(
            [r.chromatic_lower, r.nonedge_upper, r.weak_lower, r.partition_lower, r.replication_upper],
            [1; 5]
        );
        assert_eq!(r.exact.unwrap().value, 1);
        assert_eq!(r.path_upper, None);
    }

    #[test]
    fn multipartite_and_clique_unions_agree() {
        for classes in [vec![1, 2, 3], vec![2, 2, 2], vec![4, 1], vec![3, 3, 1, 1]] {
            let g = complete_multipartite(&classes).unwrap();
            let want: usize = classes.iter().map(|&x| triangle(x)).sum();
            assert_eq!(anticlique_partition_bound(&g, None).unwrap().0, want);
            assert_eq!(replication_upper_bound(&g, &BlockOrdering::IncreasingSize).unwrap(), want);
            assert_eq!(exact_formula(&g).unwrap().value, want);
        }
        for sizes in [vec![3, 2, 1], vec![2, 2], vec![4, 1, 1], vec![1, 1, 1, 1]] {
            let g = disjoint_cliques(&sizes).unwrap();
            let mut y = sizes.clone();
            y.sort_unstable_by(|a, b| b.cmp(a));
            let want: usize = y.iter().enumerate().map(|(i, &s)| (i + 1) * s).sum();
            assert_eq!(anticlique_partition_bound(&g, None).unwrap().0, want);
            assert_eq!(replication_upper_bound(&g, &BlockOrdering::IncreasingSize).unwrap(), want);
            assert_eq!(exact_formula(&g).unwrap().value, want);
        }
    }

    #[test]
    fn join_of_anticliques_is_multipartite() {
        let g = join(&anticlique(2).unwrap(), &anticlique(3).unwrap()).unwrap();
        assert_eq!(exact_formula(&g).unwrap().value, 3 + 6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn optimizer_matches_brute_force(h in arb_graph(7)) {
            let (v, blocks) = anticlique_partition_bound(&h, None).unwrap();
            prop_assert_eq!(v, brute_partition_bound(&h));
            let again = anticlique_partition_bound(&h, Some(&blocks)).unwrap().0;
            prop_assert_eq!(again, v);
            // n plus the non-edges inside blocks
            let inside: usize = blocks.iter().map(|b| b.len() * (b.len() - 1) / 2).sum();
            prop_assert_eq!(v, h.order() + inside);
        }

        #[test]
        fn report_is_consistent(h in arb_graph(8)) {
            let r = bounds_report(&h);
            prop_assert!(r.chromatic_lower <= r.nonedge_upper);
            prop_assert!(r.partition_lower <= r.nonedge_upper);
            prop_assert!(r.weak_lower <= r.chromatic_lower);
            if r.n.is_multiple_of(r.chi) {
                prop_assert_eq!(r.weak_lower, r.chromatic_lower);
            }
            prop_assert!(r.best_lower() <= r.best_upper());
            if let Some(e) = r.exact {
                prop_assert!(r.best_lower() <= e.value && e.value <= r.best_upper());
            }
        }

        #[test]
        fn exhaustive_is_minimum(h in arb_graph(6)) {
            let inc = replication_upper_bound(&h, &BlockOrdering::IncreasingSize).unwrap();
            let ex = replication_upper_bound(&h, &BlockOrdering::Exhaustive).unwrap();
            prop_assert!(ex <= inc);
        }
    }
}
