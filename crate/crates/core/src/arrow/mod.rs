//! Deciding whether every proper coloring of a host graph contains a
//! rainbow induced copy of a target graph.
//!
//! Colorings are enumerated up to renaming of colors as restricted-growth
//! strings in a fixed vertex order. A partial coloring whose colored part
//! already holds a rainbow copy is cut off, since every extension keeps it.

mod engine;
mod oracle;

use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::ReplicationStructure;
use crate::graph::{bits, find_isomorphism, Graph, InducedMatcher};

pub use engine::{arrows, arrows_replication, arrows_replication_with, arrows_with, sample_pruned_prefixes};
pub use oracle::{oracle_arrows, oracle_arrows_replication, oracle_bad_coloring, ORACLE_MAX_ORDER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrowError {
    #[error("target has {target} vertices but the host only {host}")]
    TargetLarger { target: usize, host: usize },
    #[error("node budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("coloring has {got} entries, graph has {expected} vertices")]
    ColoringLength { expected: usize, got: usize },
    #[error("coloring is improper on edge ({0}, {1})")]
    ImproperColoring(usize, usize),
    #[error("vertex order is not a permutation of the host vertices")]
    VertexOrder,
    #[error("brute-force oracle is limited to {limit} vertices, host has {order}")]
    OracleTooLarge { order: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Arrows,
    NotArrows,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Arrows => "arrows",
            Self::NotArrows => "not-arrows",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Color assignments tried.
    pub nodes: u64,
    pub max_depth: usize,
    /// Partial colorings cut off because they already held a rainbow copy.
    pub rainbow_prunes: u64,
    /// Induced copies of the target in the host (0 when not precomputed).
    pub target_copies: u64,
    pub wall_time_ms: f64,
}

/// Outcome of an arrow decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrowCertificate {
    pub verdict: Verdict,
    /// Color of each host vertex in a proper coloring without a rainbow
    /// copy; present iff the verdict is `NotArrows`.
    pub bad_coloring: Option<Vec<usize>>,
    pub stats: SearchStats,
}

impl ArrowCertificate {
    pub fn arrows(&self) -> bool {
        self.verdict == Verdict::Arrows
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArrowOptions {
    /// Maximum number of color assignments before giving up.
    pub budget: Option<u64>,
    /// Split the search over the current rayon pool.
    pub parallel: bool,
    /// Vertex assignment order. By default vertices lying in some copy of
    /// the target come first, each group by descending degree.
    pub vertex_order: Option<Vec<usize>>,
}

pub(crate) fn check_coloring(g: &Graph, coloring: &[usize]) -> Result<(), ArrowError> {
    if coloring.len() != g.order() {
        return Err(ArrowError::ColoringLength { expected: g.order(), got: coloring.len() });
    }
    match g.edges().find(|&(u, v)| coloring[u] == coloring[v]) {
        Some((u, v)) => Err(ArrowError::ImproperColoring(u, v)),
        None => Ok(()),
    }
}

/// Colors of `mask` as a bit set; colors must be below 64.
fn color_bits(coloring: &[usize], mask: u64) -> u64 {
    bits(mask).fold(0, |acc, v| acc | 1 << coloring[v])
}

fn is_rainbow(coloring: &[usize], mask: u64) -> bool {
    let mut seen = std::collections::HashSet::new();
    bits(mask).all(|v| seen.insert(coloring[v]))
}

/// Finds an induced copy of `h` in `g` whose vertices all have distinct
/// colors, optionally one that uses `must_include`.
///
/// Returns `map` with `map[x]` the vertex of `g` playing vertex `x` of `h`.
pub fn find_rainbow_copy(
    g: &Graph,
    coloring: &[usize],
    h: &Graph,
    must_include: Option<usize>,
) -> Result<Option<Vec<usize>>, ArrowError> {
    check_coloring(g, coloring)?;
    if h.order() > g.order() {
        return Ok(None);
    }
    let must = match must_include {
        Some(v) if v >= g.order() => return Ok(None),
        Some(v) => 1u64 << v,
        None => 0,
    };
    let found = InducedMatcher::new(h).for_each_copy(g, g.vertex_mask(), must, |set| {
        if is_rainbow(coloring, set) {
            ControlFlow::Break(set)
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(found.map(|set| {
        let verts: Vec<usize> = bits(set).collect();
        let iso = find_isomorphism(h, &g.induced(set)).expect("matcher returned an induced copy");
        iso.iter().map(|&i| verts[i]).collect()
    }))
}

/// Sets of vertices, one group per block, such that block `i` contributes
/// `demand[i]` vertices and all chosen colors are distinct.
///
/// Returns the chosen vertices in ascending order.
pub fn find_rainbow_transversal(
    r: &ReplicationStructure,
    coloring: &[usize],
) -> Result<Option<Vec<usize>>, ArrowError> {
    let g = r.expanded();
    check_coloring(g, coloring)?;
    let blocks: Vec<u64> = (0..r.block_count()).map(|i| r.block_mask(i)).collect();
    // Colors are renamed densely so they fit a bitmask.
    let mut names: Vec<usize> = coloring.to_vec();
    names.sort_unstable();
    names.dedup();
    let dense: Vec<usize> = coloring.iter().map(|c| names.binary_search(c).expect("present")).collect();
    let sets: Vec<u64> = blocks.iter().map(|&b| color_bits(&dense, b)).collect();
    Ok(engine::transversal(&sets, r.demand()).map(|assigned| {
        let mut out: Vec<usize> = assigned
            .iter()
            .map(|&(block, color)| {
                bits(blocks[block]).find(|&v| dense[v] == color).expect("color present in block")
            })
            .collect();
        out.sort_unstable();
        out
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, path};

    #[test]
    fn rainbow_copy_examples() {
        let k3 = clique(3).unwrap();
        assert_eq!(find_rainbow_copy(&k3, &[0, 1, 2], &k3, None).unwrap(), Some(vec![0, 1, 2]));
        let p3 = path(3).unwrap();
        assert_eq!(find_rainbow_copy(&p3, &[0, 1, 0], &p3, None).unwrap(), None);
        assert_eq!(
            find_rainbow_copy(&p3, &[0, 0, 1], &p3, None),
            Err(ArrowError::ImproperColoring(0, 1))
        );
        let p4 = path(4).unwrap();
        let emb = find_rainbow_copy(&p4, &[0, 1, 2, 0], &p3, Some(3)).unwrap().unwrap();
        assert_eq!(emb.len(), 3);
        assert!(emb.contains(&3));
        assert_eq!(find_rainbow_copy(&p4, &[0, 1, 0, 1], &p3, None).unwrap(), None);
    }

    #[test]
    fn transversal_examples() {
        let bare = ReplicationStructure::new(&path(3).unwrap(), &[1, 1, 1]).unwrap();
        assert!(find_rainbow_transversal(&bare, &[0, 1, 0]).unwrap().is_none());
        let r = ReplicationStructure::new(&path(3).unwrap(), &[2, 1, 2]).unwrap();
        // blocks {0,1}, {2}, {3,4}
        let t = find_rainbow_transversal(&r, &[0, 1, 2, 3, 0]).unwrap().unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.iter().map(|&v| r.clique_of(v)).collect::<Vec<_>>(), vec![0, 1, 2]);
    }
}
