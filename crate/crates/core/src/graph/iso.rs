//! Isomorphism testing and induced-subgraph search by backtracking.

use std::ops::ControlFlow;

use super::{bits, Graph};

fn sorted_degrees(g: &Graph) -> Vec<usize> {
    let mut d: Vec<usize> = (0..g.order()).map(|v| g.degree(v)).collect();
    d.sort_unstable();
    d
}

/// Finds a bijection `map` with `u ~ v` in `g` iff `map[u] ~ map[v]` in `h`.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    let n = g.order();
    if n != h.order() || g.edge_count() != h.edge_count() || sorted_degrees(g) != sorted_degrees(h)
    {
        return None;
    }

    // Visit order for g: greedy by connections to already-ordered vertices,
    // then degree, so adjacency constraints bite early.
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| ((g.adj(v) & placed).count_ones(), g.degree(v), std::cmp::Reverse(v)))
            .expect("unplaced vertex remains");
        order.push(next);
        placed |= 1 << next;
    }

    let mut map = vec![usize::MAX; n];
    if iso_extend(g, h, &order, 0, &mut map, 0, 0) {
        Some(map)
    } else {
        None
    }
}

fn iso_extend(
    g: &Graph,
    h: &Graph,
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    mapped_g: u64,
    used_h: u64,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let u = order[depth];
    let mut image = 0u64;
    for x in bits(g.adj(u) & mapped_g) {
        image |= 1 << map[x];
    }
    let deg = g.degree(u);
    for c in bits(h.vertex_mask() & !used_h) {
        if h.degree(c) != deg || h.adj(c) & used_h != image {
            continue;
        }
        map[u] = c;
        if iso_extend(g, h, order, depth + 1, map, mapped_g | 1 << u, used_h | 1 << c) {
            return true;
        }
    }
    map[u] = usize::MAX;
    false
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h).is_some()
}

/// Reusable searcher for induced copies of a fixed pattern graph.
#[derive(Debug, Clone)]
pub struct InducedMatcher {
    pattern: Graph,
    edges: usize,
    degrees: Vec<usize>,
}

impl InducedMatcher {
    pub fn new(pattern: &Graph) -> Self {
        Self { pattern: pattern.clone(), edges: pattern.edge_count(), degrees: sorted_degrees(pattern) }
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    /// Calls `f` with the vertex mask of every induced copy of the pattern in
    /// `g` drawn from `pool` and containing all of `must`. Stops early when
    /// `f` breaks.
    pub fn for_each_copy<B>(
        &self,
        g: &Graph,
        pool: u64,
        must: u64,
        mut f: impl FnMut(u64) -> ControlFlow<B>,
    ) -> Option<B> {
        let k = self.pattern.order();
        let pool = pool & g.vertex_mask();
        if must & !pool != 0 || must.count_ones() as usize > k || (pool.count_ones() as usize) < k {
            return None;
        }
        let must_edges = bits(must).map(|v| (g.adj(v) & must).count_ones() as usize).sum::<usize>() / 2;
        if must_edges > self.edges {
            return None;
        }
        let rest: Vec<usize> = bits(pool & !must).collect();
        match self.choose(g, &rest, 0, must, must_edges, k - must.count_ones() as usize, &mut f) {
            ControlFlow::Break(b) => Some(b),
            ControlFlow::Continue(()) => None,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn choose<B>(
        &self,
        g: &Graph,
        rest: &[usize],
        start: usize,
        chosen: u64,
        edges: usize,
        remaining: usize,
        f: &mut impl FnMut(u64) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if remaining == 0 {
            if edges == self.edges && self.matches(g, chosen) {
                return f(chosen);
            }
            return ControlFlow::Continue(());
        }
        for i in start..=rest.len().saturating_sub(remaining) {
            if rest.len() < remaining {
                break;
            }
            let v = rest[i];
            let e = edges + (g.adj(v) & chosen).count_ones() as usize;
            if e > self.edges {
                continue;
            }
            self.choose(g, rest, i + 1, chosen | 1 << v, e, remaining - 1, f)?;
        }
        ControlFlow::Continue(())
    }

    fn matches(&self, g: &Graph, set: u64) -> bool {
        let mut d: Vec<usize> = bits(set).map(|v| (g.adj(v) & set).count_ones() as usize).collect();
        d.sort_unstable();
        d == self.degrees && is_isomorphic(&g.induced(set), &self.pattern)
    }

    pub fn copies(&self, g: &Graph) -> Vec<u64> {
        let mut out = Vec::new();
        self.for_each_copy::<()>(g, g.vertex_mask(), 0, |s| {
            out.push(s);
            ControlFlow::Continue(())
        });
        out
    }

    pub fn contains(&self, g: &Graph) -> bool {
        self.pattern.order() <= g.order()
            && self.for_each_copy(g, g.vertex_mask(), 0, ControlFlow::Break).is_some()
    }
}

/// All vertex sets of `g` inducing a copy of `h`, in lexicographic order of
/// their sorted vertex lists.
pub fn induced_copies(g: &Graph, h: &Graph) -> Vec<u64> {
    InducedMatcher::new(h).copies(g)
}

pub fn contains_induced(g: &Graph, h: &Graph) -> bool {
    InducedMatcher::new(h).contains(g)
}
