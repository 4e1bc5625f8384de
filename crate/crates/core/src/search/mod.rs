//! Exact rainbow numbers by exhaustive search.
//!
//! For the induced version every isomorphism class of each order is tested,
//! smallest order first. For the replication version every size vector of
//! each total is tested in lexicographic order. Work proceeds in fixed-size
//! batches; between batches the search can be checkpointed.

mod checkpoint;
mod enumerate;

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use checkpoint::{load_checkpoint, save_checkpoint, CheckpointCursor, SearchCheckpoint, CHECKPOINT_VERSION};
pub use enumerate::{enumerate_graphs, GraphFilter, ENUMERATION_CEILING, ENUMERATION_GUARD};

use crate::arrow::{arrows, arrows_replication, arrows_replication_with, arrows_with, ArrowError, ArrowOptions, Verdict};
use crate::bounds::bounds_report;
use crate::cache::{CacheError, CacheMode, CacheRecord, ResultCache};
use crate::constructions::{
    nonedge_construction, replication_clique_construction, replication_cliques, BlockOrdering,
    ConstructionError, ReplicationStructure, EXHAUSTIVE_BLOCK_LIMIT,
};
use crate::graph::{canonical_form, chromatic_number, contains_induced, parse_graph6, to_graph6, Graph};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("enumeration of order {order} exceeds the limit {limit}")]
    OrderGuard { order: usize, limit: usize },
    #[error("checkpoint format version {found}, expected {expected}")]
    CheckpointVersion { found: u32, expected: u32 },
    #[error("checkpoint belongs to a different search: {0}")]
    CheckpointMismatch(String),
    #[error("checkpoint cursor is corrupt: {0}")]
    CorruptCursor(String),
    #[error("checkpoint I/O on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("checkpoint encoding: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Arrow(#[from] ArrowError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Cache(#[from] CacheError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMode {
    /// Any host graph, any rainbow induced copy.
    #[serde(rename = "rho")]
    Rho,
    /// Replication graphs of the target, rainbow transversals only.
    #[serde(rename = "rho_R")]
    RhoR,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Rho => "rho",
            Self::RhoR => "rho_R",
        })
    }
}

/// A host graph (graph6, canonical labeling) or a clique-size vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Graph(String),
    Sizes(Vec<usize>),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Graph(g6) => f.write_str(g6),
            Self::Sizes(s) => {
                let parts: Vec<String> = s.iter().map(usize::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SearchStatus {
    /// `value` is the exact number; `witness` arrows the target.
    Exact { value: usize, witness: Witness },
    /// No witness up to the maximum order; `witness`, if any, attains `upper`.
    /// A verified witness at exactly one past the maximum order makes the
    /// result exact instead.
    Bounded { lower: usize, upper: usize, witness: Option<Witness> },
    /// The node budget ran out while testing order `lower`.
    BudgetExhausted { lower: usize, upper: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSummary {
    pub order: usize,
    /// Candidates surviving the necessary-condition filters.
    pub candidates: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStatistics {
    pub candidates_tested: u64,
    pub arrow_nodes: u64,
    pub cache_hits: u64,
    pub per_order: Vec<OrderSummary>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// Canonical graph6 of the target.
    pub target: String,
    pub mode: SearchMode,
    #[serde(flatten)]
    pub status: SearchStatus,
    /// Orders (or totals) proven to contain no witness.
    pub orders_exhausted: Vec<usize>,
    pub stats: SearchStatistics,
}

impl SearchOutcome {
    pub fn exact_value(&self) -> Option<usize> {
        match self.status {
            SearchStatus::Exact { value, .. } => Some(value),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Largest order (or total) examined.
    pub max_order: usize,
    /// Total arrow-engine nodes allowed across the search.
    pub budget: Option<u64>,
    /// Candidates per batch. Budget accounting is settled per batch.
    pub batch: usize,
    /// Permit graph enumeration above the default guard.
    pub allow_large: bool,
    pub cache: Option<Arc<ResultCache>>,
    /// Written after every batch.
    pub checkpoint: Option<PathBuf>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { max_order: ENUMERATION_GUARD, budget: None, batch: 256, allow_large: false, cache: None, checkpoint: None }
    }
}

#[derive(Debug, Clone)]
enum Candidate {
    Graph(Graph),
    Sizes(Vec<usize>),
}

impl Candidate {
    fn label(&self) -> String {
        match self {
            Self::Graph(g) => to_graph6(g),
            Self::Sizes(s) => Witness::Sizes(s.clone()).to_string(),
        }
    }
}

enum Eval {
    Decided { arrows: bool, nodes: u64, cached: bool, record: Option<CacheRecord> },
    OutOfBudget { nodes: u64 },
}

/// All compositions of `total` into `parts` positive parts, lexicographically.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 1..=left.saturating_sub(parts - 1) {
            cur.push(first);
            rec(left - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 && total >= parts {
        rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// Resumable exhaustive search for the rainbow number of a target graph.
pub struct RhoSearch {
    h: Graph,
    target: String,
    mode: SearchMode,
    config: SearchConfig,
    order: usize,
    cursor: usize,
    last: Option<String>,
    exhausted: Vec<usize>,
    stats: SearchStatistics,
    candidates: Option<Vec<Candidate>>,
    done: Option<SearchOutcome>,
    started: Instant,
    elapsed_before: f64,
}

impl RhoSearch {
    /// Starts at order `|h|`. In replication mode, size vectors refer to the
    /// vertex labels of `h` as given.
    pub fn new(h: &Graph, mode: SearchMode, config: SearchConfig) -> Self {
        Self {
            h: h.clone(),
            target: canonical_form(h).to_graph6(),
            mode,
            config,
            order: h.order(),
            cursor: 0,
            last: None,
            exhausted: Vec::new(),
            stats: SearchStatistics::default(),
            candidates: None,
            done: None,
            started: Instant::now(),
            elapsed_before: 0.0,
        }
    }

    pub fn checkpoint(&self) -> SearchCheckpoint {
        SearchCheckpoint {
            format_version: CHECKPOINT_VERSION,
            mode: self.mode,
            target: self.target.clone(),
            labeled_target: to_graph6(&self.h),
            current_order: self.order,
            cursor: CheckpointCursor { index: self.cursor, last: self.last.clone() },
            orders_exhausted: self.exhausted.clone(),
            candidates_tested: self.stats.candidates_tested,
            nodes_used: self.stats.arrow_nodes,
            cache_hits: self.stats.cache_hits,
            per_order: self.stats.per_order.clone(),
            elapsed_ms: self.elapsed(),
        }
    }

    /// Rebuilds a search from a checkpoint, checking that it belongs to
    /// `h` in `mode` and that its cursor points at the recorded candidate.
    pub fn from_checkpoint(
        h: &Graph,
        mode: SearchMode,
        cp: &SearchCheckpoint,
        config: SearchConfig,
    ) -> Result<Self, SearchError> {
        if cp.format_version != CHECKPOINT_VERSION {
            return Err(SearchError::CheckpointVersion { found: cp.format_version, expected: CHECKPOINT_VERSION });
        }
        let mut s = Self::new(h, mode, config);
        if cp.mode != mode {
            return Err(SearchError::CheckpointMismatch(format!("mode {} vs {}", cp.mode, mode)));
        }
        if cp.target != s.target {
            return Err(SearchError::CheckpointMismatch(format!("target {} vs {}", cp.target, s.target)));
        }
        if mode == SearchMode::RhoR && cp.labeled_target != to_graph6(h) {
            return Err(SearchError::CheckpointMismatch(format!(
                "labeled target {} vs {}",
                cp.labeled_target,
                to_graph6(h)
            )));
        }
        if cp.current_order < h.order() {
            return Err(SearchError::CorruptCursor(format!("order {} below target order", cp.current_order)));
        }
        s.order = cp.current_order;
        s.exhausted = cp.orders_exhausted.clone();
        s.stats.candidates_tested = cp.candidates_tested;
        s.stats.arrow_nodes = cp.nodes_used;
        s.stats.cache_hits = cp.cache_hits;
        s.stats.per_order = cp.per_order.clone();
        s.elapsed_before = cp.elapsed_ms;
        if cp.cursor.index > 0 && s.order <= s.config.max_order {
            s.load_candidates()?;
            let list = s.candidates.as_ref().expect("just loaded");
            let at = list.get(cp.cursor.index - 1).map(Candidate::label);
            if cp.cursor.index > list.len() || at != cp.cursor.last {
                return Err(SearchError::CorruptCursor(format!(
                    "index {} does not match candidate {:?}",
                    cp.cursor.index, cp.cursor.last
                )));
            }
        } else if cp.cursor.index == 0 && cp.cursor.last.is_some() {
            return Err(SearchError::CorruptCursor("cursor at 0 names a candidate".into()));
        }
        s.cursor = cp.cursor.index;
        s.last = cp.cursor.last.clone();
        Ok(s)
    }

    fn elapsed(&self) -> f64 {
        self.elapsed_before + self.started.elapsed().as_secs_f64() * 1e3
    }

    fn load_candidates(&mut self) -> Result<(), SearchError> {
        if self.candidates.is_some() {
            return Ok(());
        }
        let list = match self.mode {
            SearchMode::Rho => {
                let h = &self.h;
                let k = h.order();
                // Each filter is necessary for arrowing h: a proper coloring with
                // chi(g) colors must still show |h| distinct colors.
                let degrees = |g: &Graph| (0..g.order()).filter(|&v| g.degree(v) + 1 >= k).count() >= k;
                let induced = |g: &Graph| contains_induced(g, h);
                let colors = |g: &Graph| chromatic_number(g) >= k;
                let filters: [GraphFilter<'_>; 3] = [&degrees, &induced, &colors];
                enumerate_graphs(self.order, &filters, self.config.allow_large)?
                    .into_iter()
                    .map(Candidate::Graph)
                    .collect()
            }
            SearchMode::RhoR => compositions(self.order, self.h.order()).into_iter().map(Candidate::Sizes).collect(),
        };
        self.candidates = Some(list);
        Ok(())
    }

    fn evaluate(&self, c: &Candidate, remaining: Option<u64>) -> Result<Eval, SearchError> {
        let (g_key, mode) = match c {
            Candidate::Graph(g) => (to_graph6(g), CacheMode::Induced),
            Candidate::Sizes(s) => (format!("{}@{}", to_graph6(&self.h), join(s)), CacheMode::Transversal),
        };
        if let Some(cache) = &self.config.cache {
            if let Some(r) = cache.lookup(&g_key, &self.target, mode) {
                return Ok(Eval::Decided { arrows: r.verdict == Verdict::Arrows, nodes: 0, cached: true, record: None });
            }
        }
        let opts = ArrowOptions { budget: remaining, ..ArrowOptions::default() };
        let result = match c {
            Candidate::Graph(g) => arrows_with(g, &self.h, &opts),
            Candidate::Sizes(s) => arrows_replication_with(&ReplicationStructure::new(&self.h, s)?, &opts),
        };
        match result {
            Ok(cert) => {
                let record = self
                    .config
                    .cache
                    .as_ref()
                    .map(|cache| cache.record(&g_key, &self.target, mode, cert.verdict, cert.bad_coloring.clone()));
                Ok(Eval::Decided { arrows: cert.arrows(), nodes: cert.stats.nodes, cached: false, record })
            }
            Err(ArrowError::BudgetExhausted { .. }) => Ok(Eval::OutOfBudget { nodes: remaining.unwrap_or(0) }),
            Err(e) => Err(e.into()),
        }
    }

    /// Best known upper bound and a witness attaining it, if one is explicit.
    fn upper(&self) -> Result<(usize, Option<Witness>), SearchError> {
        let h = &self.h;
        let path_bound = bounds_report(h).path_upper;
        let (mut best, mut witness) = match self.mode {
            SearchMode::Rho => {
                let ordering = if replication_cliques(h).len() <= EXHAUSTIVE_BLOCK_LIMIT {
                    BlockOrdering::Exhaustive
                } else {
                    BlockOrdering::IncreasingSize
                };
                let a = nonedge_construction(h, None)?;
                let b = replication_clique_construction(h, &ordering)?;
                let g = if b.total() < a.expanded().order() { b.structure.expanded().clone() } else { a.expanded().clone() };
                (g.order(), Some(Witness::Graph(canonical_form(&g).to_graph6())))
            }
            SearchMode::RhoR => {
                let a = nonedge_construction(h, None)?;
                (a.expanded().order(), Some(Witness::Sizes(a.sizes().to_vec())))
            }
        };
        if let Some(p) = path_bound.filter(|&p| p < best) {
            best = p;
            witness = None;
        }
        Ok((best, witness))
    }

    /// Re-checks a construction witness with the arrow engine.
    fn confirms(&self, w: &Witness) -> bool {
        let verdict = match w {
            Witness::Graph(g6) => parse_graph6(g6).ok().map(|g| arrows(&g, &self.h)),
            Witness::Sizes(s) => ReplicationStructure::new(&self.h, s).ok().map(|r| arrows_replication(&r)),
        };
        matches!(verdict, Some(Ok(cert)) if cert.arrows())
    }

    fn finish(&mut self, status: SearchStatus) -> SearchOutcome {
        self.stats.elapsed_ms = self.elapsed();
        let out = SearchOutcome {
            target: self.target.clone(),
            mode: self.mode,
            status,
            orders_exhausted: self.exhausted.clone(),
            stats: self.stats.clone(),
        };
        self.done = Some(out.clone());
        out
    }

    fn save(&self) -> Result<(), SearchError> {
        if let Some(path) = &self.config.checkpoint {
            save_checkpoint(path, &self.checkpoint())?;
        }
        Ok(())
    }

    /// Processes one batch (or closes one order). Returns the outcome once
    /// the search has finished.
    pub fn step(&mut self) -> Result<Option<SearchOutcome>, SearchError> {
        if let Some(done) = &self.done {
            return Ok(Some(done.clone()));
        }
        if self.order > self.config.max_order {
            let (upper, witness) = self.upper()?;
            let lower = (self.config.max_order + 1).max(bounds_report(&self.h).best_lower());
            // every smaller order is exhausted, so a witness one order up is optimal
            if upper == self.config.max_order + 1 {
                if let Some(w) = witness.as_ref().filter(|w| self.confirms(w)) {
                    let witness = w.clone();
                    return Ok(Some(self.finish(SearchStatus::Exact { value: upper, witness })));
                }
            }
            return Ok(Some(self.finish(SearchStatus::Bounded { lower, upper, witness })));
        }
        self.load_candidates()?;
        let list = self.candidates.as_ref().expect("just loaded");
        if self.cursor >= list.len() {
            self.exhausted.push(self.order);
            self.stats.per_order.push(OrderSummary { order: self.order, candidates: list.len() });
            self.order += 1;
            self.cursor = 0;
            self.last = None;
            self.candidates = None;
            self.save()?;
            return Ok(None);
        }

        let end = (self.cursor + self.config.batch.max(1)).min(list.len());
        let batch = &list[self.cursor..end];
        let remaining = self.config.budget.map(|b| b.saturating_sub(self.stats.arrow_nodes));
        let evals: Vec<Eval> =
            batch.par_iter().map(|c| self.evaluate(c, remaining)).collect::<Result<_, SearchError>>()?;

        let mut nodes = 0u64;
        let mut out_of_budget = false;
        let mut first_hit = None;
        let mut records = Vec::new();
        let mut hits = 0;
        for (i, e) in evals.into_iter().enumerate() {
            match e {
                Eval::Decided { arrows, nodes: n, cached, record } => {
                    nodes += n;
                    hits += u64::from(cached);
                    records.extend(record);
                    if arrows && first_hit.is_none() {
                        first_hit = Some(i);
                    }
                }
                Eval::OutOfBudget { nodes: n } => {
                    nodes += n;
                    out_of_budget = true;
                }
            }
        }
        self.stats.arrow_nodes += nodes;
        self.stats.cache_hits += hits;
        if let Some(cache) = &self.config.cache {
            cache.append_all(records)?;
        }
        let over = self.config.budget.is_some_and(|b| self.stats.arrow_nodes > b);
        if out_of_budget || over {
            let (upper, _) = self.upper()?;
            return Ok(Some(self.finish(SearchStatus::BudgetExhausted { lower: self.order, upper })));
        }
        self.stats.candidates_tested += batch.len() as u64;
        if let Some(i) = first_hit {
            let witness = match &batch[i] {
                Candidate::Graph(g) => Witness::Graph(to_graph6(g)),
                Candidate::Sizes(s) => Witness::Sizes(s.clone()),
            };
            self.stats.per_order.push(OrderSummary { order: self.order, candidates: list.len() });
            let value = self.order;
            return Ok(Some(self.finish(SearchStatus::Exact { value, witness })));
        }
        self.last = Some(batch[batch.len() - 1].label());
        self.cursor = end;
        self.save()?;
        Ok(None)
    }

    pub fn run(mut self) -> Result<SearchOutcome, SearchError> {
        loop {
            if let Some(out) = self.step()? {
                return Ok(out);
            }
        }
    }
}

fn join(s: &[usize]) -> String {
    s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// Smallest order of a graph arrowing `h`, searching orders `|h|..=max_order`.
pub fn rho_exact(h: &Graph, config: SearchConfig) -> Result<SearchOutcome, SearchError> {
    RhoSearch::new(h, SearchMode::Rho, config).run()
}

/// Smallest order of a replication graph of `h` with the transversal
/// property, searching totals `|h|..=max_order`.
pub fn rho_r_search(h: &Graph, config: SearchConfig) -> Result<SearchOutcome, SearchError> {
    RhoSearch::new(h, SearchMode::RhoR, config).run()
}
