//! Builders for the named graph families.

use std::fmt;
use std::str::FromStr;

use super::{Graph, GraphError, MAX_ORDER};

fn family_err(msg: impl Into<String>) -> GraphError {
    GraphError::Family(msg.into())
}

/// Path on `n` vertices (`n - 1` edges), vertices in path order.
pub fn path(n: usize) -> Result<Graph, GraphError> {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

pub fn clique(n: usize) -> Result<Graph, GraphError> {
    Ok(Graph::new(n)?.complement())
}

pub fn anticlique(n: usize) -> Result<Graph, GraphError> {
    Graph::new(n)
}

/// Star `S_n = K_{1,n-1}`; vertex 0 is the center.
pub fn star(n: usize) -> Result<Graph, GraphError> {
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    Graph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(family_err(format!("cycle needs at least 3 vertices, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

/// Complete multipartite graph; class `i` occupies a contiguous vertex range.
pub fn complete_multipartite(sizes: &[usize]) -> Result<Graph, GraphError> {
    let classes = class_ranges(sizes)?;
    let n = sizes.iter().sum();
    let mut g = Graph::new(n)?;
    for (a, ra) in classes.iter().enumerate() {
        for rb in &classes[a + 1..] {
            for u in ra.clone() {
                for v in rb.clone() {
                    g.set_edge(u, v);
                }
            }
        }
    }
    Ok(g)
}

/// Disjoint union of cliques of the given sizes, in order.
pub fn disjoint_cliques(sizes: &[usize]) -> Result<Graph, GraphError> {
    Ok(complete_multipartite(sizes)?.complement())
}

fn class_ranges(sizes: &[usize]) -> Result<Vec<std::ops::Range<usize>>, GraphError> {
    if sizes.is_empty() {
        return Err(family_err("at least one class is required"));
    }
    if let Some(i) = sizes.iter().position(|&s| s == 0) {
        return Err(family_err(format!("class {i} has size 0")));
    }
    let total: usize = sizes.iter().sum();
    if total > MAX_ORDER {
        return Err(GraphError::Order(total));
    }
    let mut start = 0;
    Ok(sizes
        .iter()
        .map(|&s| {
            let r = start..start + s;
            start += s;
            r
        })
        .collect())
}

/// Class sizes of `T(n, r)`, larger classes first.
pub fn turan_class_sizes(n: usize, r: usize) -> Result<Vec<usize>, GraphError> {
    if r == 0 || r > n {
        return Err(family_err(format!("turan requires 1 <= r <= n, got n={n}, r={r}")));
    }
    let (q, rem) = (n / r, n % r);
    Ok((0..r).map(|i| if i < rem { q + 1 } else { q }).collect())
}

pub fn turan(n: usize, r: usize) -> Result<Graph, GraphError> {
    complete_multipartite(&turan_class_sizes(n, r)?)
}

/// Disjoint union; the vertices of `parts[i]` follow those of `parts[i-1]`.
pub fn disjoint_union(parts: &[&Graph]) -> Result<Graph, GraphError> {
    combine(parts, false)
}

/// Join: disjoint union plus every edge between `g1` and `g2`.
pub fn join(g1: &Graph, g2: &Graph) -> Result<Graph, GraphError> {
    combine(&[g1, g2], true)
}

fn combine(parts: &[&Graph], full: bool) -> Result<Graph, GraphError> {
    if parts.is_empty() {
        return Err(family_err("no graphs to combine"));
    }
    let n: usize = parts.iter().map(|g| g.order()).sum();
    let mut g = Graph::new(n)?;
    let mut offset = 0;
    for (idx, part) in parts.iter().enumerate() {
        for (u, v) in part.edges() {
            g.set_edge(offset + u, offset + v);
        }
        if full {
            let later: usize = parts[idx + 1..].iter().map(|p| p.order()).sum();
            for u in 0..part.order() {
                for v in 0..later {
                    g.set_edge(offset + u, offset + part.order() + v);
                }
            }
        }
        offset += part.order();
    }
    Ok(g)
}

/// A named family with parameters, in the `name:params` shorthand:
/// `path:5`, `clique:4`, `anticlique:3`, `star:5`, `cycle:6`,
/// `kpartite:2,2,3`, `turan:7,3`, `cliques:3,2,1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Path(usize),
    Clique(usize),
    Anticlique(usize),
    Star(usize),
    Cycle(usize),
    Multipartite(Vec<usize>),
    Turan(usize, usize),
    DisjointCliques(Vec<usize>),
}

impl FamilySpec {
    pub const NAMES: [&'static str; 8] =
        ["path", "clique", "anticlique", "star", "cycle", "kpartite", "turan", "cliques"];

    pub fn build(&self) -> Result<Graph, GraphError> {
        match self {
            FamilySpec::Path(n) => path(*n),
            FamilySpec::Clique(n) => clique(*n),
            FamilySpec::Anticlique(n) => anticlique(*n),
            FamilySpec::Star(n) => star(*n),
            FamilySpec::Cycle(n) => cycle(*n),
            FamilySpec::Multipartite(xs) => complete_multipartite(xs),
            FamilySpec::Turan(n, r) => turan(*n, *r),
            FamilySpec::DisjointCliques(ys) => disjoint_cliques(ys),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>, GraphError> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| family_err(format!("bad integer {t:?}"))))
        .collect()
}

impl FromStr for FamilySpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, params) = s
            .split_once(':')
            .ok_or_else(|| family_err(format!("expected <family>:<params>, got {s:?}")))?;
        let nums = parse_list(params)?;
        let one = || -> Result<usize, GraphError> {
            match nums.as_slice() {
                [n] => Ok(*n),
                _ => Err(family_err(format!("{name} takes exactly one parameter"))),
            }
        };
        Ok(match name {
            "path" => FamilySpec::Path(one()?),
            "clique" => FamilySpec::Clique(one()?),
            "anticlique" => FamilySpec::Anticlique(one()?),
            "star" => FamilySpec::Star(one()?),
            "cycle" => FamilySpec::Cycle(one()?),
            "kpartite" => FamilySpec::Multipartite(nums),
            "cliques" => FamilySpec::DisjointCliques(nums),
            "turan" => match nums.as_slice() {
                [n, r] => FamilySpec::Turan(*n, *r),
                _ => return Err(family_err("turan takes two parameters n,r")),
            },
            other => return Err(family_err(format!("unknown family {other:?}"))),
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |xs: &[usize]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            FamilySpec::Path(n) => write!(f, "path:{n}"),
            FamilySpec::Clique(n) => write!(f, "clique:{n}"),
            FamilySpec::Anticlique(n) => write!(f, "anticlique:{n}"),
            FamilySpec::Star(n) => write!(f, "star:{n}"),
            FamilySpec::Cycle(n) => write!(f, "cycle:{n}"),
            FamilySpec::Multipartite(xs) => write!(f, "kpartite:{}", list(xs)),
            FamilySpec::Turan(n, r) => write!(f, "turan:{n},{r}"),
            FamilySpec::DisjointCliques(ys) => write!(f, "cliques:{}", list(ys)),
        }
    }
}
