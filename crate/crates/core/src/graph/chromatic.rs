//! Chromatic number: DSATUR for an upper bound, then exact k-colorability
//! tests by DSATUR-ordered backtracking, starting from the clique number.

use super::{bits, Graph};

/// Greedy DSATUR coloring; colors are `0..k`.
pub fn dsatur_coloring(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut color = vec![usize::MAX; n];
    let mut sat = vec![0u64; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| color[v] == usize::MAX)
            .max_by_key(|&v| (sat[v].count_ones(), g.degree(v), std::cmp::Reverse(v)))
            .expect("uncolored vertex remains");
        let c = (!sat[v]).trailing_zeros() as usize;
        color[v] = c;
        for u in bits(g.adj(v)) {
            sat[u] |= 1 << c;
        }
    }
    color
}

/// Size of a largest clique.
pub fn clique_number(g: &Graph) -> usize {
    fn expand(g: &Graph, cand: u64, size: usize, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        let mut cand = cand;
        while cand != 0 {
            if size + cand.count_ones() as usize <= *best {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= !(1 << v);
            expand(g, cand & g.adj(v), size + 1, best);
        }
    }
    let mut best = 0;
    expand(g, g.vertex_mask(), 0, &mut best);
    best
}

/// Whether `g` has a proper coloring with at most `k` colors.
pub fn is_k_colorable(g: &Graph, k: usize) -> bool {
    let n = g.order();
    if k >= n {
        return true;
    }
    if k == 0 {
        return false;
    }
    let mut color = vec![usize::MAX; n];
    // forbidden[v]: colors used by colored neighbors of v
    let mut forbidden = vec![0u64; n];
    fn rec(g: &Graph, k: usize, color: &mut [usize], forbidden: &mut Vec<u64>, colored: usize, used: usize) -> bool {
        let n = g.order();
        if colored == n {
            return true;
        }
        let v = (0..n)
            .filter(|&v| color[v] == usize::MAX)
            .max_by_key(|&v| (forbidden[v].count_ones(), g.degree(v)))
            .expect("uncolored vertex remains");
        // A fresh color is interchangeable with any other fresh color.
        let limit = (used + 1).min(k);
        for c in 0..limit {
            if forbidden[v] >> c & 1 == 1 {
                continue;
            }
            color[v] = c;
            let saved = forbidden.clone();
            for u in bits(g.adj(v)) {
                forbidden[u] |= 1 << c;
            }
            if rec(g, k, color, forbidden, colored + 1, used.max(c + 1)) {
                return true;
            }
            *forbidden = saved;
        }
        color[v] = usize::MAX;
        false
    }
    rec(g, k, &mut color, &mut forbidden, 0, 0)
}

pub fn chromatic_number(g: &Graph) -> usize {
    let upper = dsatur_coloring(g).into_iter().max().map_or(0, |c| c + 1);
    let lower = clique_number(g);
    (lower..upper).find(|&k| is_k_colorable(g, k)).unwrap_or(upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, complete_multipartite, cycle, path};
    use proptest::prelude::*;

    fn brute_chromatic(g: &Graph) -> usize {
        let n = g.order();
        (1..=n)
            .find(|&k| {
                let total = k.pow(n as u32);
                (0..total).any(|mut code| {
                    let mut col = vec![0; n];
                    for c in col.iter_mut() {
                        *c = code % k;
                        code /= k;
                    }
                    g.edges().all(|(u, v)| col[u] != col[v])
                })
            })
            .unwrap()
    }

    fn brute_clique(g: &Graph) -> usize {
        (1u64..=g.vertex_mask()).filter(|&m| g.is_clique(m)).map(|m| m.count_ones() as usize).max().unwrap()
    }

    #[test]
    fn examples() {
        for n in 1..=9 {
            assert_eq!(chromatic_number(&clique(n).unwrap()), n);
        }
        assert_eq!(chromatic_number(&path(5).unwrap()), 2);
        assert_eq!(chromatic_number(&cycle(5).unwrap()), 3);
        assert_eq!(chromatic_number(&cycle(6).unwrap()), 2);
        assert_eq!(chromatic_number(&complete_multipartite(&[2, 3, 1]).unwrap()), 3);
        assert_eq!(chromatic_number(&Graph::new(4).unwrap()), 1);
    }

    #[test]
    fn petersen_needs_three() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        let g = Graph::from_edges(10, &edges).unwrap();
        assert_eq!(chromatic_number(&g), 3);
        assert_eq!(clique_number(&g), 2);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for j in 1..n {
                    for i in 0..j {
                        if bits[k] {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn matches_brute_force(g in arb_graph(7)) {
            let chi = chromatic_number(&g);
            prop_assert_eq!(chi, brute_chromatic(&g));
            let maxdeg = (0..g.order()).map(|v| g.degree(v)).max().unwrap();
            prop_assert!(chi <= maxdeg + 1);
            prop_assert!(chi >= brute_clique(&g));
            prop_assert_eq!(clique_number(&g), brute_clique(&g));
        }

        #[test]
        fn dsatur_is_proper(g in arb_graph(12)) {
            let col = dsatur_coloring(&g);
            prop_assert!(g.edges().all(|(u, v)| col[u] != col[v]));
        }

        #[test]
        fn complement_is_involution(g in arb_graph(20)) {
            prop_assert_eq!(g.complement().complement(), g.clone());
            prop_assert_eq!(g.complement().edge_count() + g.edge_count(), g.order() * (g.order() - 1) / 2);
        }
    }
}
