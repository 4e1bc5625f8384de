//! Executes a parsed command into a report and an exit status.

use std::sync::Arc;

use serde_json::json;

use rho_core::arrow::{arrows_replication_with, arrows_with, oracle_arrows_replication, oracle_bad_coloring, ArrowError, ArrowOptions, Verdict};
use rho_core::bounds::bounds_report;
use rho_core::cache::{CacheMode, ResultCache};
use rho_core::constructions::{
    nonedge_construction, replication_clique_construction, replication_graph, BlockOrdering, ReplicationStructure,
};
use rho_core::graph::{canonical_form, canonical_labeling, to_graph6, Graph};
use rho_core::search::{load_checkpoint, RhoSearch, SearchConfig, SearchMode, SearchStatus};

use crate::args::{ArrowMode, BlockOrder, Cli, Command, ConstructionKind, SearchArgs};
use crate::input::{parse_graph_arg, GraphInput};
use crate::report::{CacheSection, ConstructionSection, Graphs, Query, Report, SearchSection};
use crate::{CliError, Exit};

pub struct Outcome {
    pub report: Report,
    pub exit: Exit,
}

fn mode_name(mode: ArrowMode) -> &'static str {
    match mode {
        ArrowMode::Induced => "r",
        ArrowMode::Transversal => "R",
    }
}

fn join(s: &[usize]) -> String {
    s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// Cache key of a replication graph: the labeled base and its sizes.
fn replication_key(base: &Graph, sizes: &[usize]) -> String {
    format!("{}@{}", to_graph6(base), join(sizes))
}

fn open_cache(path: Option<&std::path::PathBuf>) -> Result<Option<Arc<ResultCache>>, CliError> {
    Ok(match path {
        Some(p) => Some(Arc::new(ResultCache::open(p)?)),
        None => None,
    })
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Bounds { h } => bounds(h),
        Command::Verify { g, h, mode, sizes, oracle, budget, cache } => {
            verify(g.as_deref(), h, *mode, sizes.as_deref(), *oracle, *budget, cache.as_ref())
        }
        Command::Rho(a) => search(a, SearchMode::Rho),
        Command::RhoR(a) => search(a, SearchMode::RhoR),
        Command::Construct { kind, h, sizes, block_order } => construct(*kind, h, sizes.as_deref(), *block_order),
        Command::Cache { path, g, h, mode } => cache(path, g.as_deref(), h.as_deref(), *mode),
    }
}

fn bounds(h_arg: &str) -> Result<Outcome, CliError> {
    let h = parse_graph_arg(h_arg)?.graph;
    let mut report = Report::new(Query { verb: "bounds".into(), h: Some(h_arg.into()), ..Query::default() });
    report.graphs.h = Some(to_graph6(&h));
    report.bounds = Some(bounds_report(&h));
    Ok(Outcome { report, exit: Exit::Success })
}

/// Resolves the replication structure for mode R: sizes come from
/// `--sizes` or from an `@` suffix on `--g` whose base is `h`.
fn replication_for(h: &Graph, g: Option<&GraphInput>, sizes: Option<&[usize]>) -> Result<ReplicationStructure, CliError> {
    let sizes = match (sizes, g) {
        (Some(s), _) => s.to_vec(),
        (None, Some(GraphInput { base: Some(base), sizes: Some(s), .. })) => {
            if base != h {
                return Err(CliError::Option("the base of --g must be --h as labeled".into()));
            }
            s.clone()
        }
        _ => return Err(CliError::Option("mode R needs --sizes or a --g of the form <family>:<params>@<sizes>".into())),
    };
    Ok(replication_graph(h, &sizes)?)
}

#[allow(clippy::too_many_arguments)]
fn verify(
    g_arg: Option<&str>,
    h_arg: &str,
    mode: ArrowMode,
    sizes: Option<&[usize]>,
    oracle: bool,
    budget: Option<u64>,
    cache_path: Option<&std::path::PathBuf>,
) -> Result<Outcome, CliError> {
    let h = parse_graph_arg(h_arg)?.graph;
    let g_in = g_arg.map(parse_graph_arg).transpose()?;
    let mut report = Report::new(Query {
        verb: "verify".into(),
        g: g_arg.map(str::to_string),
        h: Some(h_arg.into()),
        mode: Some(mode_name(mode).into()),
        sizes: sizes.map(<[usize]>::to_vec),
        budget,
        ..Query::default()
    });
    let cache = open_cache(cache_path)?;
    let h_key = canonical_form(&h).to_graph6();
    let opts = ArrowOptions { budget, parallel: true, ..ArrowOptions::default() };

    let (g, key, cache_mode, perm) = match mode {
        ArrowMode::Induced => {
            let g = match (&g_in, sizes) {
                (Some(gi), None) => gi.graph.clone(),
                (None, Some(s)) => replication_graph(&h, s)?.expanded().clone(),
                (Some(_), Some(_)) => return Err(CliError::Option("give either --g or --sizes, not both".into())),
                (None, None) => return Err(CliError::Option("mode r needs --g or --sizes".into())),
            };
            let (form, perm) = canonical_labeling(&g);
            (g, form.to_graph6(), CacheMode::Induced, Some(perm))
        }
        ArrowMode::Transversal => {
            let r = replication_for(&h, g_in.as_ref(), sizes)?;
            let key = replication_key(&h, r.sizes());
            (r.expanded().clone(), key, CacheMode::Transversal, None)
        }
    };
    report.graphs = Graphs { g: Some(to_graph6(&g)), h: Some(to_graph6(&h)) };

    if oracle {
        let (verdict, bad) = match mode {
            ArrowMode::Induced => {
                let bad = oracle_bad_coloring(&g, &h)?;
                (if bad.is_none() { Verdict::Arrows } else { Verdict::NotArrows }, bad)
            }
            ArrowMode::Transversal => {
                let r = replication_for(&h, g_in.as_ref(), sizes)?;
                (if oracle_arrows_replication(&r)? { Verdict::Arrows } else { Verdict::NotArrows }, None)
            }
        };
        report.verdict = Some(verdict);
        report.bad_coloring = bad;
        report.stats = json!({ "oracle": true, "cached": false });
        return Ok(Outcome { exit: verdict_exit(verdict), report });
    }

    let hit = cache.as_ref().and_then(|c| c.lookup(&key, &h_key, cache_mode));
    let (verdict, canon_bad, stats) = match hit {
        Some(rec) => (rec.verdict, rec.bad_coloring, json!({ "cached": true })),
        None => {
            let result = match &perm {
                Some(p) => arrows_with(&g.relabel(p), &h, &opts),
                None => arrows_replication_with(&replication_for(&h, g_in.as_ref(), sizes)?, &opts),
            };
            let cert = match result {
                Ok(c) => c,
                Err(ArrowError::BudgetExhausted { budget }) => {
                    report.stats = json!({ "cached": false, "budget_exhausted": budget });
                    return Ok(Outcome { report, exit: Exit::BudgetExhausted });
                }
                Err(e) => return Err(e.into()),
            };
            if let Some(c) = &cache {
                c.append(c.record(&key, &h_key, cache_mode, cert.verdict, cert.bad_coloring.clone()))?;
            }
            let mut stats = serde_json::to_value(&cert.stats)?;
            stats["cached"] = json!(false);
            (cert.verdict, cert.bad_coloring, stats)
        }
    };
    report.verdict = Some(verdict);
    report.bad_coloring = canon_bad.map(|c| match &perm {
        Some(p) => {
            let mut orig = vec![0; c.len()];
            for (i, &x) in c.iter().enumerate() {
                orig[p[i]] = x;
            }
            orig
        }
        None => c,
    });
    report.stats = stats;
    Ok(Outcome { exit: verdict_exit(verdict), report })
}

fn verdict_exit(v: Verdict) -> Exit {
    match v {
        Verdict::Arrows => Exit::Success,
        Verdict::NotArrows => Exit::Negative,
    }
}

fn search(a: &SearchArgs, mode: SearchMode) -> Result<Outcome, CliError> {
    let h = parse_graph_arg(&a.h)?.graph;
    let verb = match mode {
        SearchMode::Rho => "rho",
        SearchMode::RhoR => "rho-r",
    };
    let mut report = Report::new(Query {
        verb: verb.into(),
        h: Some(a.h.clone()),
        max_order: Some(a.max_order),
        budget: a.budget,
        ..Query::default()
    });
    let config = SearchConfig {
        max_order: a.max_order,
        budget: a.budget,
        allow_large: a.allow_large,
        cache: open_cache(a.cache.as_ref())?,
        checkpoint: a.checkpoint.clone(),
        ..SearchConfig::default()
    };
    let runner = match &a.checkpoint {
        Some(p) if p.exists() => RhoSearch::from_checkpoint(&h, mode, &load_checkpoint(p)?, config)?,
        _ => RhoSearch::new(&h, mode, config),
    };
    let out = runner.run()?;
    report.graphs.h = Some(to_graph6(&h));
    if let SearchStatus::Exact { witness: rho_core::search::Witness::Graph(g6), .. } = &out.status {
        report.graphs.g = Some(g6.clone());
    }
    report.bounds = Some(bounds_report(&h));
    report.search = Some(SearchSection::from(&out));
    report.stats = serde_json::to_value(&out.stats)?;
    let exit = match out.status {
        SearchStatus::Exact { .. } => Exit::Success,
        SearchStatus::Bounded { .. } => Exit::Negative,
        SearchStatus::BudgetExhausted { .. } => Exit::BudgetExhausted,
    };
    Ok(Outcome { report, exit })
}

fn construct(kind: ConstructionKind, h_arg: &str, sizes: Option<&[usize]>, order: BlockOrder) -> Result<Outcome, CliError> {
    let h = parse_graph_arg(h_arg)?.graph;
    let mut report = Report::new(Query {
        verb: "construct".into(),
        h: Some(h_arg.into()),
        sizes: sizes.map(<[usize]>::to_vec),
        ..Query::default()
    });
    let (g, section) = match kind {
        ConstructionKind::Nonedge => {
            let r = nonedge_construction(&h, sizes)?;
            let order = r.expanded().order();
            let section = ConstructionSection { kind: "nonedge".into(), sizes: r.sizes().to_vec(), order, blocks: None, block_order: None };
            (r.expanded().clone(), section)
        }
        ConstructionKind::ReplicationCliques => {
            let ordering = match order {
                BlockOrder::Increasing => BlockOrdering::IncreasingSize,
                BlockOrder::Exhaustive => BlockOrdering::Exhaustive,
            };
            let c = replication_clique_construction(&h, &ordering)?;
            let section = ConstructionSection {
                kind: "replication-cliques".into(),
                sizes: c.structure.sizes().to_vec(),
                order: c.total(),
                blocks: Some(c.blocks.clone()),
                block_order: Some(c.order.clone()),
            };
            (c.structure.expanded().clone(), section)
        }
        ConstructionKind::Replication => {
            let s = sizes.ok_or_else(|| CliError::Option("replication needs --sizes".into()))?;
            let r = replication_graph(&h, s)?;
            let section = ConstructionSection {
                kind: "replication".into(),
                sizes: s.to_vec(),
                order: r.expanded().order(),
                blocks: None,
                block_order: None,
            };
            (r.expanded().clone(), section)
        }
    };
    report.graphs = Graphs { g: Some(to_graph6(&g)), h: Some(to_graph6(&h)) };
    report.construction = Some(section);
    Ok(Outcome { report, exit: Exit::Success })
}

fn cache(path: &std::path::Path, g_arg: Option<&str>, h_arg: Option<&str>, mode: ArrowMode) -> Result<Outcome, CliError> {
    let c = ResultCache::open(path)?;
    let mut report = Report::new(Query {
        verb: "cache".into(),
        g: g_arg.map(str::to_string),
        h: h_arg.map(str::to_string),
        mode: Some(mode_name(mode).into()),
        ..Query::default()
    });
    let mut hit = None;
    if let (Some(g_arg), Some(h_arg)) = (g_arg, h_arg) {
        let g = parse_graph_arg(g_arg)?;
        let h = parse_graph_arg(h_arg)?.graph;
        let h_key = canonical_form(&h).to_graph6();
        hit = match mode {
            ArrowMode::Induced => c.lookup(&canonical_form(&g.graph).to_graph6(), &h_key, CacheMode::Induced),
            ArrowMode::Transversal => {
                let r = replication_for(&h, Some(&g), None)?;
                c.lookup(&replication_key(&h, r.sizes()), &h_key, CacheMode::Transversal)
            }
        };
        report.graphs = Graphs { g: Some(to_graph6(&g.graph)), h: Some(to_graph6(&h)) };
        report.verdict = hit.as_ref().map(|r| r.verdict);
    }
    let exit = if g_arg.is_some() && hit.is_none() { Exit::Negative } else { Exit::Success };
    report.cache = Some(CacheSection { path: path.display().to_string(), records: c.len(), hit });
    Ok(Outcome { report, exit })
}
