//! One graph per isomorphism class, by adding a vertex to every class of the
//! previous order in every possible way and deduplicating canonical forms.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use super::SearchError;
use crate::graph::{canonical_form, Graph};

/// Orders above this need `allow_large`.
pub const ENUMERATION_GUARD: usize = 9;
/// Hard ceiling for enumeration, even with `allow_large`.
pub const ENUMERATION_CEILING: usize = 12;

/// Parents expanded per round; bounds peak memory at high orders.
const CHUNK: usize = 2048;

/// Shared predicate applied to complete candidates before deduplication.
pub type GraphFilter<'a> = &'a (dyn Fn(&Graph) -> bool + Sync);

fn levels() -> &'static Mutex<HashMap<usize, Arc<Vec<u128>>>> {
    static LEVELS: OnceLock<Mutex<HashMap<usize, Arc<Vec<u128>>>>> = OnceLock::new();
    LEVELS.get_or_init(|| Mutex::new(HashMap::new()))
}

fn key(g: &Graph) -> u128 {
    canonical_form(g).key128().expect("enumeration orders fit 128 bits")
}

/// Inverse of `key`: bit `k` of the upper triangle sits at bit `127 - k`.
fn graph_of(order: usize, key: u128) -> Graph {
    let mut g = Graph::new(order).expect("order in range");
    let mut k = 0;
    for j in 1..order {
        for i in 0..j {
            if key >> (127 - k) & 1 == 1 {
                g.set_edge(i, j);
            }
            k += 1;
        }
    }
    g
}

fn merge_sorted(a: Vec<u128>, b: Vec<u128>) -> Vec<u128> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sorted canonical keys of every extension of `parents` passing `filters`.
fn extend(parents: &[u128], parent_order: usize, filters: &[GraphFilter<'_>]) -> Vec<u128> {
    let mut all = Vec::new();
    for chunk in parents.chunks(CHUNK) {
        let mut keys: Vec<u128> = chunk
            .par_iter()
            .flat_map_iter(|&k| {
                let p = graph_of(parent_order, k);
                (0u64..1 << parent_order).filter_map(move |nbrs| {
                    let g = p.with_vertex(nbrs).expect("order below ceiling");
                    filters.iter().all(|f| f(&g)).then(|| key(&g))
                })
            })
            .collect();
        keys.par_sort_unstable();
        keys.dedup();
        all = merge_sorted(all, keys);
    }
    all
}

/// Canonical keys of all graphs of `order`, cached per process.
fn level(order: usize) -> Arc<Vec<u128>> {
    if let Some(l) = levels().lock().expect("level cache poisoned").get(&order) {
        return Arc::clone(l);
    }
    let keys = if order == 1 {
        vec![key(&Graph::new(1).expect("order 1"))]
    } else {
        extend(&level(order - 1), order - 1, &[])
    };
    let keys = Arc::new(keys);
    levels().lock().expect("level cache poisoned").insert(order, Arc::clone(&keys));
    keys
}

/// One canonically labeled graph per isomorphism class of the given order
/// that passes every filter, sorted by canonical form.
///
/// Filters must be isomorphism invariant. They are applied to candidates
/// before deduplication, so the classes of the last order are never all
/// materialized.
pub fn enumerate_graphs(
    order: usize,
    filters: &[GraphFilter<'_>],
    allow_large: bool,
) -> Result<Vec<Graph>, SearchError> {
    if order == 0 || order > ENUMERATION_CEILING || (order > ENUMERATION_GUARD && !allow_large) {
        return Err(SearchError::OrderGuard { order, limit: if allow_large { ENUMERATION_CEILING } else { ENUMERATION_GUARD } });
    }
    let keys = if filters.is_empty() {
        level(order).to_vec()
    } else if order == 1 {
        let g = Graph::new(1).expect("order 1");
        if filters.iter().all(|f| f(&g)) { vec![key(&g)] } else { vec![] }
    } else {
        extend(&level(order - 1), order - 1, filters)
    };
    Ok(keys.into_par_iter().map(|k| graph_of(order, k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, contains_induced, is_isomorphic};

    #[test]
    fn class_counts() {
        // OEIS A000088
        let want = [1, 1, 2, 4, 11, 34, 156, 1044, 12346];
        for n in 1..=8 {
            assert_eq!(enumerate_graphs(n, &[], false).unwrap().len(), want[n], "order {n}");
        }
    }

    #[test]
    fn order_four_matches_pairwise_dedup() {
        let mut reps: Vec<Graph> = Vec::new();
        for code in 0u64..64 {
            let pairs = (1..4).flat_map(|j| (0..j).map(move |i| (i, j)));
            let edges: Vec<_> = pairs.enumerate().filter(|(k, _)| code >> k & 1 == 1).map(|(_, p)| p).collect();
            let g = Graph::from_edges(4, &edges).unwrap();
            if !reps.iter().any(|r| is_isomorphic(r, &g)) {
                reps.push(g);
            }
        }
        let ours = enumerate_graphs(4, &[], false).unwrap();
        assert_eq!(ours.len(), reps.len());
        for r in &reps {
            assert_eq!(ours.iter().filter(|g| is_isomorphic(g, r)).count(), 1);
        }
    }

    #[test]
    fn filters_and_guard() {
        let k5 = clique(5).unwrap();
        let f = |g: &Graph| contains_induced(g, &k5);
        let got = enumerate_graphs(5, &[&f], false).unwrap();
        assert_eq!(got, vec![k5.clone()]);
        assert_eq!(enumerate_graphs(1, &[], false).unwrap().len(), 1);
        assert!(matches!(enumerate_graphs(10, &[], false), Err(SearchError::OrderGuard { order: 10, .. })));
    }
}
