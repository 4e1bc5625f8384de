//! The report printed by every command, as JSON or text.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use rho_core::arrow::Verdict;
use rho_core::bounds::BoundsReport;
use rho_core::cache::CacheRecord;
use rho_core::search::{SearchOutcome, SearchStatus, Witness};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub verb: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

/// graph6 codes of the host and target.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graphs {
    pub g: Option<String>,
    pub h: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSection {
    /// `exact`, `bounded`, or `budget-exhausted`.
    pub status: String,
    pub value: Option<usize>,
    pub witness: Option<Witness>,
    pub lower: Option<usize>,
    pub upper: Option<usize>,
    pub orders_exhausted: Vec<usize>,
}

impl From<&SearchOutcome> for SearchSection {
    fn from(out: &SearchOutcome) -> Self {
        let (status, value, witness, lower, upper) = match &out.status {
            SearchStatus::Exact { value, witness } => ("exact", Some(*value), Some(witness.clone()), Some(*value), Some(*value)),
            SearchStatus::Bounded { lower, upper, witness } => ("bounded", None, witness.clone(), Some(*lower), Some(*upper)),
            SearchStatus::BudgetExhausted { lower, upper } => ("budget-exhausted", None, None, Some(*lower), Some(*upper)),
        };
        Self { status: status.into(), value, witness, lower, upper, orders_exhausted: out.orders_exhausted.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSection {
    pub kind: String,
    /// Clique size per vertex of the replicated graph.
    pub sizes: Vec<usize>,
    pub order: usize,
    /// Vertex classes replicated, for the replication-clique construction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_order: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheSection {
    pub path: String,
    pub records: usize,
    pub hit: Option<CacheRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub query: Query,
    pub graphs: Graphs,
    pub bounds: Option<BoundsReport>,
    pub verdict: Option<Verdict>,
    pub bad_coloring: Option<Vec<usize>>,
    pub search: Option<SearchSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache: Option<CacheSection>,
    pub stats: serde_json::Value,
    pub engine_version: String,
}

impl Report {
    pub fn new(query: Query) -> Self {
        Self {
            query,
            graphs: Graphs::default(),
            bounds: None,
            verdict: None,
            bad_coloring: None,
            search: None,
            construction: None,
            cache: None,
            stats: serde_json::Value::Object(Default::default()),
            engine_version: rho_core::cache::ENGINE_VERSION.to_string(),
        }
    }

    pub fn to_json(&self) -> Result<String, serde_json::Error> {
        serde_json::to_string_pretty(self)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let list = |xs: &[usize]| xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        if let Some(h) = &self.graphs.h {
            let _ = writeln!(s, "h: {h}");
        }
        if let Some(g) = &self.graphs.g {
            let _ = writeln!(s, "g: {g}");
        }
        if let Some(b) = &self.bounds {
            let _ = writeln!(s, "order {}, chromatic number {}, non-edges {}", b.n, b.chi, b.m_prime);
            let _ = writeln!(s, "chromatic bounds: {} <= rho <= {}", b.chromatic_lower, b.nonedge_upper);
            let _ = writeln!(s, "weak lower bound: {}", b.weak_lower);
            let parts: Vec<String> = b.partition.iter().map(|p| format!("{{{}}}", list(p))).collect();
            let _ = writeln!(s, "anticlique partition bound: {} via {}", b.partition_lower, parts.join(" "));
            let _ = writeln!(s, "replication-clique upper bound: {}", b.replication_upper);
            if let Some(p) = b.path_upper {
                let _ = writeln!(s, "path upper bound: {p}");
            }
            if let Some(e) = &b.exact {
                let _ = writeln!(s, "exact value: {} ({})", e.value, serde_json::to_value(e.family).unwrap_or_default());
            }
        }
        if let Some(c) = &self.construction {
            let _ = writeln!(s, "{} construction: order {}, sizes ({})", c.kind, c.order, list(&c.sizes));
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(s, "verdict: {v}");
        }
        if let Some(c) = &self.bad_coloring {
            let _ = writeln!(s, "bad coloring: {}", list(c));
        }
        if let Some(r) = &self.search {
            match (r.value, r.lower, r.upper) {
                (Some(v), _, _) => {
                    let _ = writeln!(s, "exact: {v}");
                }
                (None, Some(lo), Some(hi)) => {
                    let _ = writeln!(s, "{}: {lo} <= value <= {hi}", r.status);
                }
                _ => {
                    let _ = writeln!(s, "{}", r.status);
                }
            }
            if let Some(w) = &r.witness {
                let _ = writeln!(s, "witness: {w}");
            }
            let _ = writeln!(s, "orders exhausted: {}", list(&r.orders_exhausted));
        }
        if let Some(c) = &self.cache {
            let _ = writeln!(s, "cache {}: {} records", c.path, c.records);
            match &c.hit {
                Some(r) => {
                    let _ = writeln!(s, "hit: {}", r.verdict);
                }
                None if self.query.g.is_some() => {
                    let _ = writeln!(s, "miss");
                }
                None => {}
            }
        }
        s
    }
}
