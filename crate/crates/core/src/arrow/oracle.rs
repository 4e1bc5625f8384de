//! Unpruned brute-force reference for the arrow relation.
//!
//! Every restricted-growth string over the host vertices (in index order)
//! is generated, improper ones are discarded, and each survivor is checked
//! against every vertex subset with a permutation-based isomorphism test.
//! Nothing here shares code with the search engine.

use super::ArrowError;
use crate::constructions::ReplicationStructure;
use crate::graph::Graph;

/// Largest host order the oracle accepts.
pub const ORACLE_MAX_ORDER: usize = 8;

fn guard(n: usize) -> Result<(), ArrowError> {
    if n > ORACLE_MAX_ORDER {
        Err(ArrowError::OracleTooLarge { order: n, limit: ORACLE_MAX_ORDER })
    } else {
        Ok(())
    }
}

/// Calls `f` on every restricted-growth string of length `n` in
/// lexicographic order until it returns `true`.
fn each_rg_string(n: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(s: &mut Vec<usize>, n: usize, max: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if s.len() == n {
            return f(s);
        }
        let top = if s.is_empty() { 0 } else { max + 1 };
        for c in 0..=top {
            s.push(c);
            let stop = rec(s, n, max.max(c), f);
            s.pop();
            if stop {
                return true;
            }
        }
        false
    }
    rec(&mut Vec::with_capacity(n), n, 0, &mut f)
}

fn proper(g: &Graph, c: &[usize]) -> bool {
    (0..g.order()).all(|u| (u + 1..g.order()).all(|v| !g.has_edge(u, v) || c[u] != c[v]))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for i in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=p.len()).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, i);
                    q
                })
            })
            .collect();
    }
    out
}

/// Vertex lists of `g` inducing a graph isomorphic to `h`.
fn induced_sets(g: &Graph, h: &Graph) -> Vec<Vec<usize>> {
    let (n, k) = (g.order(), h.order());
    let perms = permutations(k);
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>())
        .filter(|set| {
            perms.iter().any(|p| {
                (0..k).all(|a| (0..k).all(|b| a == b || g.has_edge(set[p[a]], set[p[b]]) == h.has_edge(a, b)))
            })
        })
        .collect()
}

fn distinct(colors: impl Iterator<Item = usize>) -> bool {
    let mut seen = Vec::new();
    for c in colors {
        if seen.contains(&c) {
            return false;
        }
        seen.push(c);
    }
    true
}

/// First proper restricted-growth coloring of `g` (vertex 0 first) without
/// a rainbow induced copy of `h`.
pub fn oracle_bad_coloring(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>, ArrowError> {
    guard(g.order())?;
    if h.order() > g.order() {
        return Err(ArrowError::TargetLarger { target: h.order(), host: g.order() });
    }
    let sets = induced_sets(g, h);
    let mut found = None;
    each_rg_string(g.order(), |c| {
        if proper(g, c) && !sets.iter().any(|s| distinct(s.iter().map(|&v| c[v]))) {
            found = Some(c.to_vec());
            true
        } else {
            false
        }
    });
    Ok(found)
}

/// Brute-force answer to whether `g` arrows `h`.
pub fn oracle_arrows(g: &Graph, h: &Graph) -> Result<bool, ArrowError> {
    Ok(oracle_bad_coloring(g, h)?.is_none())
}

/// All ways to pick `d` vertices from `members`.
fn subsets(members: &[usize], d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    if members.len() < d {
        return Vec::new();
    }
    let mut out = subsets(&members[1..], d);
    for mut rest in subsets(&members[1..], d - 1) {
        rest.insert(0, members[0]);
        out.push(rest);
    }
    out
}

/// Brute-force transversal version: every proper coloring must allow
/// choosing `demand[i]` vertices from each block with all colors distinct.
pub fn oracle_arrows_replication(r: &ReplicationStructure) -> Result<bool, ArrowError> {
    let g = r.expanded();
    guard(g.order())?;
    let choices: Vec<Vec<Vec<usize>>> = (0..r.block_count())
        .map(|b| {
            let members: Vec<usize> = (0..g.order()).filter(|&v| r.clique_of(v) == b).collect();
            subsets(&members, r.demand()[b])
        })
        .collect();
    // Every combination of per-block choices, as flat vertex lists.
    let mut transversals: Vec<Vec<usize>> = vec![Vec::new()];
    for options in &choices {
        transversals = transversals
            .iter()
            .flat_map(|t| {
                options.iter().map(move |o| {
                    let mut x = t.clone();
                    x.extend_from_slice(o);
                    x
                })
            })
            .collect();
    }
    let bad = each_rg_string(g.order(), |c| {
        proper(g, c) && !transversals.iter().any(|t| distinct(t.iter().map(|&v| c[v])))
    });
    Ok(!bad)
}
