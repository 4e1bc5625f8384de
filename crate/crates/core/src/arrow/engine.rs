//! Backtracking search for a proper coloring without a rainbow target copy.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::{ArrowCertificate, ArrowError, ArrowOptions, SearchStats, Verdict};
use crate::constructions::ReplicationStructure;
use crate::graph::{bits, Graph, InducedMatcher};

/// Above this many target copies, copies are searched on the fly instead.
const COPY_LIMIT: usize = 1 << 20;
const FLUSH_EVERY: u64 = 1024;
const UNSET: u8 = u8::MAX;

enum Checker {
    /// Copies indexed by the vertex colored last among their members.
    Copies { k: u32, by_last: Vec<Vec<u64>> },
    Matcher { k: u32, matcher: InducedMatcher },
    /// Block `block_of[v]`, per-block demand, and the first position at
    /// which every block has enough colored vertices.
    Transversal { block_of: Vec<usize>, demand: Vec<usize>, ready: usize },
}

struct Ctx<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    /// Positions `stop..` hold vertices in no target copy; they are colored greedily.
    stop: usize,
    /// For each position, an earlier interchangeable vertex and the minimum
    /// color gap to it (1 for adjacent twins, 0 otherwise).
    twin_prev: Vec<Option<(usize, u8)>>,
    checker: Checker,
    budget: Option<u64>,
    nodes: AtomicU64,
    best: AtomicUsize,
    out_of_budget: AtomicBool,
}

#[derive(Debug, PartialEq, Eq)]
enum Flow {
    Exhausted,
    Found,
    Stop,
}

struct Worker<'c, 'a> {
    ctx: &'c Ctx<'a>,
    index: usize,
    color: Vec<u8>,
    bit: Vec<u64>,
    colored: u64,
    used: u8,
    block_colors: Vec<u64>,
    nodes: u64,
    unflushed: u64,
    prunes: u64,
    max_depth: usize,
    result: Option<Vec<usize>>,
    recorder: Option<(usize, Vec<Vec<Option<usize>>>)>,
}

impl<'c, 'a> Worker<'c, 'a> {
    fn new(ctx: &'c Ctx<'a>, index: usize) -> Self {
        let n = ctx.g.order();
        let blocks = match &ctx.checker {
            Checker::Transversal { demand, .. } => demand.len(),
            _ => 0,
        };
        Self {
            ctx,
            index,
            color: vec![UNSET; n],
            bit: vec![0; n],
            colored: 0,
            used: 0,
            block_colors: vec![0; blocks],
            nodes: 0,
            unflushed: 0,
            prunes: 0,
            max_depth: 0,
            result: None,
            recorder: None,
        }
    }

    #[inline]
    fn assign(&mut self, v: usize, c: u8) {
        self.color[v] = c;
        self.bit[v] = 1 << c;
        self.colored |= 1 << v;
        if let Checker::Transversal { block_of, .. } = &self.ctx.checker {
            self.block_colors[block_of[v]] |= 1 << c;
        }
    }

    #[inline]
    fn unassign(&mut self, v: usize) {
        if let Checker::Transversal { block_of, .. } = &self.ctx.checker {
            self.block_colors[block_of[v]] &= !self.bit[v];
        }
        self.color[v] = UNSET;
        self.bit[v] = 0;
        self.colored &= !(1 << v);
    }

    fn restore(&mut self, prefix: &[u8]) {
        for (p, &c) in prefix.iter().enumerate() {
            self.assign(self.ctx.order[p], c);
            self.used = self.used.max(c + 1);
        }
    }

    fn flush(&mut self) {
        self.ctx.nodes.fetch_add(self.unflushed, Ordering::Relaxed);
        self.unflushed = 0;
    }

    /// Counts one node; `true` when the search must stop.
    #[inline]
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.unflushed += 1;
        if self.unflushed >= FLUSH_EVERY {
            self.flush();
        }
        if let Some(b) = self.ctx.budget {
            if self.ctx.nodes.load(Ordering::Relaxed) + self.unflushed > b {
                self.ctx.out_of_budget.store(true, Ordering::Relaxed);
                return true;
            }
        }
        self.ctx.best.load(Ordering::Relaxed) < self.index || self.ctx.out_of_budget.load(Ordering::Relaxed)
    }

    #[inline]
    fn forbidden(&self, v: usize) -> u64 {
        bits(self.ctx.g.adj(v) & self.colored).fold(0, |acc, u| acc | self.bit[u])
    }

    fn lowest_color(&self, pos: usize) -> u8 {
        match self.ctx.twin_prev[pos] {
            Some((u, gap)) => self.color[u] + gap,
            None => 0,
        }
    }

    /// Whether the coloring now holds a rainbow copy through `v`, colored at `pos`.
    fn rainbow_at(&self, pos: usize, v: usize) -> bool {
        match &self.ctx.checker {
            Checker::Copies { k, by_last } => by_last[v]
                .iter()
                .any(|&m| bits(m).fold(0u64, |acc, u| acc | self.bit[u]).count_ones() == *k),
            Checker::Matcher { k, matcher } => matcher
                .for_each_copy(self.ctx.g, self.colored, 1 << v, |m| {
                    if bits(m).fold(0u64, |acc, u| acc | self.bit[u]).count_ones() == *k {
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                })
                .is_some(),
            Checker::Transversal { demand, ready, .. } => {
                pos >= *ready && transversal(&self.block_colors, demand).is_some()
            }
        }
    }

    fn record(&mut self) {
        if let Some((limit, out)) = &mut self.recorder {
            if out.len() < *limit {
                out.push(self.color.iter().map(|&c| (c != UNSET).then_some(usize::from(c))).collect());
            }
        }
    }

    /// Tries each admissible color at `pos`; `visit` runs on surviving assignments.
    fn branch(&mut self, pos: usize, mut visit: impl FnMut(&mut Self) -> Flow) -> Flow {
        self.max_depth = self.max_depth.max(pos + 1);
        let v = self.ctx.order[pos];
        let forbidden = self.forbidden(v);
        let used = self.used;
        for c in self.lowest_color(pos)..=used {
            if forbidden >> c & 1 == 1 {
                continue;
            }
            if self.tick() {
                return Flow::Stop;
            }
            self.assign(v, c);
            self.used = used.max(c + 1);
            let flow = if self.rainbow_at(pos, v) {
                self.prunes += 1;
                self.record();
                Flow::Exhausted
            } else {
                visit(self)
            };
            self.used = used;
            self.unassign(v);
            if flow != Flow::Exhausted {
                return flow;
            }
        }
        Flow::Exhausted
    }

    fn dfs(&mut self, pos: usize) -> Flow {
        if pos == self.ctx.stop {
            self.complete(pos);
            return Flow::Found;
        }
        self.branch(pos, |w| w.dfs(pos + 1))
    }

    /// Colors positions `pos..` greedily and stores the full coloring.
    fn complete(&mut self, pos: usize) {
        let mut color = self.color.clone();
        let mut bit = self.bit.clone();
        let mut colored = self.colored;
        for &v in &self.ctx.order[pos..] {
            let forbidden = bits(self.ctx.g.adj(v) & colored).fold(0u64, |acc, u| acc | bit[u]);
            let c = (!forbidden).trailing_zeros() as u8;
            color[v] = c;
            bit[v] = 1 << c;
            colored |= 1 << v;
        }
        self.result = Some(color.into_iter().map(usize::from).collect());
    }

    /// Surviving one-vertex extensions of the current prefix.
    fn expand(&mut self, pos: usize, out: &mut Vec<Vec<u8>>) -> Flow {
        self.branch(pos, |w| {
            out.push(w.ctx.order[..=pos].iter().map(|&u| w.color[u]).collect());
            Flow::Exhausted
        })
    }

    fn stats(&self) -> SearchStats {
        SearchStats {
            nodes: self.nodes,
            max_depth: self.max_depth,
            rainbow_prunes: self.prunes,
            ..SearchStats::default()
        }
    }
}

/// Assigns each block `demand[i]` distinct colors from `sets[i]`, all
/// colors distinct overall. Returns `(block, color)` pairs.
pub(crate) fn transversal(sets: &[u64], demand: &[usize]) -> Option<Vec<(usize, usize)>> {
    let total: usize = demand.iter().sum();
    let union = sets.iter().fold(0u64, |a, &s| a | s);
    if (union.count_ones() as usize) < total
        || sets.iter().zip(demand).any(|(s, &d)| (s.count_ones() as usize) < d)
    {
        return None;
    }
    let slots: Vec<usize> = demand.iter().enumerate().flat_map(|(i, &d)| std::iter::repeat_n(i, d)).collect();
    let mut owner = [usize::MAX; 64];

    fn augment(s: usize, slots: &[usize], sets: &[u64], owner: &mut [usize; 64], visited: &mut u64) -> bool {
        for c in bits(sets[slots[s]]) {
            if *visited >> c & 1 == 1 {
                continue;
            }
            *visited |= 1 << c;
            if owner[c] == usize::MAX || augment(owner[c], slots, sets, owner, visited) {
                owner[c] = s;
                return true;
            }
        }
        false
    }

    for s in 0..slots.len() {
        let mut visited = 0u64;
        if !augment(s, &slots, sets, &mut owner, &mut visited) {
            return None;
        }
    }
    let mut out: Vec<(usize, usize)> =
        (0..64).filter(|&c| owner[c] != usize::MAX).map(|c| (slots[owner[c]], c)).collect();
    out.sort_unstable();
    Some(out)
}

fn check_order(n: usize, order: &[usize]) -> Result<(), ArrowError> {
    let mut seen = 0u64;
    for &v in order {
        if v >= n || seen >> v & 1 == 1 {
            return Err(ArrowError::VertexOrder);
        }
        seen |= 1 << v;
    }
    if order.len() != n {
        return Err(ArrowError::VertexOrder);
    }
    Ok(())
}

/// Vertices of `relevant` first, then the rest; each group by descending
/// degree, ties by index.
fn default_order(g: &Graph, relevant: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.order()).collect();
    order.sort_by_key(|&v| (relevant >> v & 1 == 0, std::cmp::Reverse(g.degree(v)), v));
    order
}

fn twin_links(order: &[usize], stop: usize, twins: impl Fn(usize, usize) -> Option<u8>) -> Vec<Option<(usize, u8)>> {
    (0..order.len())
        .map(|p| {
            if p >= stop {
                return None;
            }
            (0..p).rev().find_map(|q| twins(order[q], order[p]).map(|gap| (order[q], gap)))
        })
        .collect()
}

fn build_induced<'a>(g: &'a Graph, h: &Graph, opts: &ArrowOptions) -> Result<(Ctx<'a>, u64), ArrowError> {
    let n = g.order();
    if h.order() > n {
        return Err(ArrowError::TargetLarger { target: h.order(), host: n });
    }
    if let Some(o) = &opts.vertex_order {
        check_order(n, o)?;
    }
    let matcher = InducedMatcher::new(h);
    let mut copies = Vec::new();
    let overflow = matcher
        .for_each_copy(g, g.vertex_mask(), 0, |m| {
            copies.push(m);
            if copies.len() > COPY_LIMIT {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .is_some();
    let relevant = if overflow { g.vertex_mask() } else { copies.iter().fold(0, |a, &m| a | m) };
    let order = opts.vertex_order.clone().unwrap_or_else(|| default_order(g, relevant));
    let stop = order.iter().rposition(|&v| relevant >> v & 1 == 1).map_or(0, |p| p + 1);
    let k = h.order() as u32;
    let checker = if overflow {
        Checker::Matcher { k, matcher }
    } else {
        let mut pos_of = vec![0; n];
        for (p, &v) in order.iter().enumerate() {
            pos_of[v] = p;
        }
        let mut by_last = vec![Vec::new(); n];
        for &m in &copies {
            let last = bits(m).max_by_key(|&v| pos_of[v]).expect("copies are nonempty");
            by_last[last].push(m);
        }
        Checker::Copies { k, by_last }
    };
    let twin_prev = twin_links(&order, stop, |u, v| {
        if g.adj(u) == g.adj(v) {
            Some(0)
        } else if g.adj(u) | 1 << u == g.adj(v) | 1 << v {
            Some(1)
        } else {
            None
        }
    });
    let ctx = Ctx::new(g, order, stop, twin_prev, checker, opts.budget);
    Ok((ctx, if overflow { 0 } else { copies.len() as u64 }))
}

fn build_transversal<'a>(r: &'a ReplicationStructure, opts: &ArrowOptions) -> Result<Ctx<'a>, ArrowError> {
    let g = r.expanded();
    let n = g.order();
    if let Some(o) = &opts.vertex_order {
        check_order(n, o)?;
    }
    let order = opts.vertex_order.clone().unwrap_or_else(|| default_order(g, g.vertex_mask()));
    let block_of = r.clique_map().to_vec();
    let demand = r.demand().to_vec();
    let mut have = vec![0; demand.len()];
    let mut missing = demand.len();
    let mut ready = n;
    for (p, &v) in order.iter().enumerate() {
        let b = block_of[v];
        have[b] += 1;
        if have[b] == demand[b] {
            missing -= 1;
            if missing == 0 {
                ready = p;
                break;
            }
        }
    }
    let twin_prev = twin_links(&order, n, |u, v| (block_of[u] == block_of[v]).then_some(1));
    let checker = Checker::Transversal { block_of, demand, ready };
    Ok(Ctx::new(g, order, n, twin_prev, checker, opts.budget))
}

impl<'a> Ctx<'a> {
    fn new(
        g: &'a Graph,
        order: Vec<usize>,
        stop: usize,
        twin_prev: Vec<Option<(usize, u8)>>,
        checker: Checker,
        budget: Option<u64>,
    ) -> Self {
        Self {
            g,
            order,
            stop,
            twin_prev,
            checker,
            budget,
            nodes: AtomicU64::new(0),
            best: AtomicUsize::new(usize::MAX),
            out_of_budget: AtomicBool::new(false),
        }
    }

    fn run(&self, parallel: bool) -> Result<(Option<Vec<usize>>, SearchStats), ArrowError> {
        let (result, stats) = if parallel && rayon::current_num_threads() > 1 {
            self.run_parallel()
        } else {
            let mut w = Worker::new(self, 0);
            w.dfs(0);
            (w.result.take(), w.stats())
        };
        if self.out_of_budget.load(Ordering::Relaxed) && result.is_none() {
            return Err(ArrowError::BudgetExhausted { budget: self.budget.unwrap_or(0) });
        }
        Ok((result, stats))
    }

    fn run_parallel(&self) -> (Option<Vec<usize>>, SearchStats) {
        let target = rayon::current_num_threads() * 32;
        let mut frontier: Vec<Vec<u8>> = vec![Vec::new()];
        let mut depth = 0;
        let mut stats = SearchStats::default();
        while frontier.len() < target && depth < self.stop {
            let mut next = Vec::new();
            for prefix in &frontier {
                let mut sub = Worker::new(self, 0);
                sub.restore(prefix);
                let flow = sub.expand(depth, &mut next);
                sub.flush();
                merge(&mut stats, &sub.stats());
                if flow == Flow::Stop {
                    return (None, stats);
                }
            }
            stats.max_depth = depth + 1;
            frontier = next;
            depth += 1;
            if frontier.is_empty() {
                return (None, stats);
            }
        }

        let outcomes: Vec<(usize, Flow, Option<Vec<usize>>, SearchStats)> = frontier
            .par_iter()
            .enumerate()
            .map(|(i, prefix)| {
                let mut w = Worker::new(self, i);
                w.restore(prefix);
                let flow = w.dfs(depth);
                w.flush();
                if flow == Flow::Found {
                    self.best.fetch_min(i, Ordering::Relaxed);
                }
                let s = w.stats();
                (i, flow, w.result, s)
            })
            .collect();
        let mut result = None;
        for (_, flow, found, s) in outcomes {
            merge(&mut stats, &s);
            if flow == Flow::Found && result.is_none() {
                result = found;
            }
        }
        (result, stats)
    }
}

fn merge(total: &mut SearchStats, part: &SearchStats) {
    total.nodes += part.nodes;
    total.rainbow_prunes += part.rainbow_prunes;
    total.max_depth = total.max_depth.max(part.max_depth);
}

fn certificate(
    ctx: &Ctx<'_>,
    parallel: bool,
    copies: u64,
    start: Instant,
) -> Result<ArrowCertificate, ArrowError> {
    let (bad, mut stats) = ctx.run(parallel)?;
    stats.target_copies = copies;
    stats.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(ArrowCertificate {
        verdict: if bad.is_some() { Verdict::NotArrows } else { Verdict::Arrows },
        bad_coloring: bad,
        stats,
    })
}

/// Decides whether every proper coloring of `g` has a rainbow induced copy of `h`.
pub fn arrows(g: &Graph, h: &Graph) -> Result<ArrowCertificate, ArrowError> {
    arrows_with(g, h, &ArrowOptions::default())
}

pub fn arrows_with(g: &Graph, h: &Graph, opts: &ArrowOptions) -> Result<ArrowCertificate, ArrowError> {
    let start = Instant::now();
    let (ctx, copies) = build_induced(g, h, opts)?;
    certificate(&ctx, opts.parallel, copies, start)
}

/// Decides whether every proper coloring of the expanded graph has a
/// rainbow transversal: `demand[i]` vertices from each block `i`, all
/// colors distinct.
pub fn arrows_replication(r: &ReplicationStructure) -> Result<ArrowCertificate, ArrowError> {
    arrows_replication_with(r, &ArrowOptions::default())
}

pub fn arrows_replication_with(
    r: &ReplicationStructure,
    opts: &ArrowOptions,
) -> Result<ArrowCertificate, ArrowError> {
    let start = Instant::now();
    let ctx = build_transversal(r, opts)?;
    certificate(&ctx, opts.parallel, 0, start)
}

/// Partial colorings (indexed by vertex) at which the sequential search
/// found a rainbow copy and cut the branch, up to `limit` of them.
pub fn sample_pruned_prefixes(
    g: &Graph,
    h: &Graph,
    opts: &ArrowOptions,
    limit: usize,
) -> Result<Vec<Vec<Option<usize>>>, ArrowError> {
    let (ctx, _) = build_induced(g, h, opts)?;
    let mut w = Worker::new(&ctx, 0);
    w.recorder = Some((limit, Vec::new()));
    w.dfs(0);
    Ok(w.recorder.map(|(_, v)| v).unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, disjoint_cliques, path};

    #[test]
    fn transversal_matching() {
        assert_eq!(transversal(&[0b1, 0b1], &[1, 1]), None);
        assert_eq!(transversal(&[0b11, 0b1], &[1, 1]), Some(vec![(0, 1), (1, 0)]));
        assert_eq!(transversal(&[0b111, 0b011], &[2, 1]).map(|v| v.len()), Some(3));
        assert_eq!(transversal(&[0b011, 0b011], &[2, 1]), None);
    }

    #[test]
    fn small_examples() {
        for n in 1..=6 {
            let k = clique(n).unwrap();
            assert!(arrows(&k, &k).unwrap().arrows());
        }
        let p4 = path(4).unwrap();
        let cert = arrows(&p4, &p4).unwrap();
        assert_eq!(cert.verdict, Verdict::NotArrows);
        assert_eq!(cert.bad_coloring.as_deref().map(|c| c.len()), Some(4));
        let g = disjoint_cliques(&[2, 4]).unwrap();
        assert!(arrows(&g, &disjoint_cliques(&[2, 2]).unwrap()).unwrap().arrows());
        assert_eq!(
            arrows(&path(2).unwrap(), &path(3).unwrap()),
            Err(ArrowError::TargetLarger { target: 3, host: 2 })
        );
    }

    #[test]
    fn budget_is_reported() {
        let r = ReplicationStructure::new(&path(5).unwrap(), &[1, 2, 2, 2, 3]).unwrap();
        let opts = ArrowOptions { budget: Some(10), ..ArrowOptions::default() };
        assert_eq!(arrows_replication_with(&r, &opts), Err(ArrowError::BudgetExhausted { budget: 10 }));
    }
}
