//! Canonical forms.
//!
//! Vertices are first partitioned by iterated degree refinement into an
//! ordered sequence of cells; this partition depends only on the isomorphism
//! class. The canonical form is the lexicographically smallest upper-triangle
//! bit string (graph6 bit order) over all relabelings that list the cells in
//! order. The search over relabelings prunes on string prefixes and skips
//! interchangeable twin vertices, whose transposition is an automorphism.

use std::cmp::Ordering;
use std::fmt;

use super::{bits, Graph};

/// Canonical representative of an isomorphism class.
///
/// `words` holds the upper-triangle bits `x(0,1), x(0,2), x(1,2), x(0,3), ...`
/// packed most-significant-first, so the derived ordering is lexicographic on
/// the bit string for graphs of equal order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: u8,
    words: Vec<u64>,
}

impl CanonicalForm {
    pub fn order(&self) -> usize {
        usize::from(self.n)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Compact key for graphs of order at most 16 (120 bits).
    pub fn key128(&self) -> Option<u128> {
        match self.words.as_slice() {
            [] => Some(0),
            [a] => Some(u128::from(*a) << 64),
            [a, b] => Some(u128::from(*a) << 64 | u128::from(*b)),
            _ => None,
        }
    }

    pub fn to_graph(&self) -> Graph {
        let n = self.order();
        let mut g = Graph::new(n).expect("canonical form has valid order");
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if self.words[k / 64] >> (63 - k % 64) & 1 == 1 {
                    g.set_edge(i, j);
                }
                k += 1;
            }
        }
        g
    }

    pub fn to_graph6(&self) -> String {
        super::to_graph6(&self.to_graph())
    }

    fn from_relabeling(g: &Graph, perm: &[usize]) -> Self {
        let n = g.order();
        let nbits = n * (n - 1) / 2;
        let mut words = vec![0u64; nbits.div_ceil(64)];
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if g.has_edge(perm[i], perm[j]) {
                    words[k / 64] |= 1 << (63 - k % 64);
                }
                k += 1;
            }
        }
        Self { n: n as u8, words }
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_graph6())
    }
}

/// Ordered cells of the stable degree refinement.
fn refine(g: &Graph) -> Vec<u64> {
    let n = g.order();
    let mut color: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut ncolors = 0;
    loop {
        let mut sigs: Vec<(usize, Vec<usize>, usize)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = bits(g.adj(v)).map(|u| color[u]).collect();
                nb.sort_unstable();
                (color[v], nb, v)
            })
            .collect();
        sigs.sort_unstable();
        let mut next = vec![0; n];
        let mut c = 0;
        for i in 0..n {
            if i > 0 && (sigs[i].0 != sigs[i - 1].0 || sigs[i].1 != sigs[i - 1].1) {
                c += 1;
            }
            next[sigs[i].2] = c;
        }
        let count = c + 1;
        color = next;
        if count == ncolors {
            break;
        }
        ncolors = count;
    }
    let mut cells = vec![0u64; ncolors];
    for v in 0..n {
        cells[color[v]] |= 1 << v;
    }
    cells
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    cell_of_pos: Vec<u64>,
    // twins[v]: twins of v with a smaller index (same open or closed neighborhood)
    lower_twins: Vec<u64>,
    perm: Vec<usize>,
    cols: Vec<u64>,
    best_cols: Vec<u64>,
    best_perm: Vec<usize>,
    have_best: bool,
}

impl Search<'_> {
    fn prefix_cmp(&self, j: usize) -> Ordering {
        if !self.have_best {
            return Ordering::Less;
        }
        self.cols[..=j].cmp(&self.best_cols[..=j])
    }

    fn dfs(&mut self, j: usize, used: u64) {
        if j == self.n {
            if !self.have_best || self.cols < self.best_cols {
                self.best_cols.clone_from(&self.cols);
                self.best_perm.clone_from(&self.perm);
                self.have_best = true;
            }
            return;
        }
        let cand = self.cell_of_pos[j] & !used;
        for u in bits(cand) {
            if self.lower_twins[u] & cand != 0 {
                continue;
            }
            let mut col = 0u64;
            for i in 0..j {
                col = col << 1 | u64::from(self.g.has_edge(self.perm[i], u));
            }
            self.cols[j] = col;
            if self.prefix_cmp(j) == Ordering::Greater {
                continue;
            }
            self.perm[j] = u;
            self.dfs(j + 1, used | 1 << u);
        }
    }
}

/// Canonical form together with the labeling that produces it:
/// canonical vertex `i` is vertex `perm[i]` of `g`.
pub fn canonical_labeling(g: &Graph) -> (CanonicalForm, Vec<usize>) {
    let n = g.order();
    let cells = refine(g);
    let mut cell_of_pos = Vec::with_capacity(n);
    for &c in &cells {
        for _ in 0..c.count_ones() {
            cell_of_pos.push(c);
        }
    }
    let lower_twins = (0..n)
        .map(|v| {
            let open = g.adj(v);
            let closed = open | 1 << v;
            (0..v)
                .filter(|&u| g.adj(u) == open || g.adj(u) | 1 << u == closed)
                .fold(0u64, |m, u| m | 1 << u)
        })
        .collect();
    let mut s = Search {
        g,
        n,
        cell_of_pos,
        lower_twins,
        perm: vec![0; n],
        cols: vec![0; n],
        best_cols: vec![0; n],
        best_perm: vec![0; n],
        have_best: false,
    };
    s.dfs(0, 0);
    let perm = s.best_perm;
    (CanonicalForm::from_relabeling(g, &perm), perm)
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    canonical_labeling(g).0
}
