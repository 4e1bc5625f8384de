use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use rho_core::arrow::{
    arrows, arrows_replication, arrows_replication_with, arrows_with, find_rainbow_copy,
    find_rainbow_transversal, oracle_arrows, oracle_arrows_replication, oracle_bad_coloring,
    sample_pruned_prefixes, ArrowOptions, Verdict,
};
use rho_core::constructions::{
    nonedge_construction, replication_clique_construction, BlockOrdering, ReplicationStructure,
};
use rho_core::graph::{clique, disjoint_cliques, path, Graph};

fn graph_from_code(n: usize, code: u64) -> Graph {
    let pairs = (1..n).flat_map(|j| (0..j).map(move |i| (i, j)));
    let edges: Vec<_> = pairs.enumerate().filter(|(k, _)| code >> k & 1 == 1).map(|(_, p)| p).collect();
    Graph::from_edges(n, &edges).unwrap()
}

fn arb_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        let m = n * (n - 1) / 2;
        (0u64..(1u64 << m)).prop_map(move |code| graph_from_code(n, code))
    })
}

fn targets() -> Vec<Graph> {
    vec![path(2).unwrap(), path(3).unwrap(), path(4).unwrap(), clique(3).unwrap(), disjoint_cliques(&[1, 2]).unwrap()]
}

fn identity(n: usize) -> ArrowOptions {
    ArrowOptions { vertex_order: Some((0..n).collect()), ..ArrowOptions::default() }
}

#[test]
fn agrees_with_oracle_on_all_labeled_five_vertex_graphs() {
    for n in 1..=5 {
        for code in 0u64..1 << (n * (n - 1) / 2) {
            let g = graph_from_code(n, code);
            for h in targets().iter().filter(|h| h.order() <= n) {
                let fast = arrows(&g, h).unwrap().arrows();
                assert_eq!(fast, oracle_arrows(&g, h).unwrap(), "g = {g:?}, h = {h:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn identity_order_reproduces_oracle_witness(g in arb_graph(2, 7), t in 0usize..5) {
        let h = &targets()[t];
        prop_assume!(h.order() <= g.order());
        let cert = arrows_with(&g, h, &identity(g.order())).unwrap();
        prop_assert_eq!(cert.bad_coloring, oracle_bad_coloring(&g, h).unwrap());
    }

    #[test]
    fn bad_colorings_revalidate(g in arb_graph(3, 9), t in 0usize..5) {
        let h = &targets()[t];
        prop_assume!(h.order() <= g.order());
        let cert = arrows(&g, h).unwrap();
        if let Some(c) = &cert.bad_coloring {
            prop_assert_eq!(cert.verdict, Verdict::NotArrows);
            prop_assert_eq!(find_rainbow_copy(&g, c, h, None).unwrap(), None);
            // restricted growth in some order means the colors used are 0..k
            let k = c.iter().max().unwrap() + 1;
            prop_assert!((0..k).all(|x| c.contains(&x)));
        }
    }

    #[test]
    fn isolated_vertex_keeps_arrowing(g in arb_graph(2, 7), t in 0usize..5) {
        let h = &targets()[t];
        prop_assume!(h.order() <= g.order());
        if arrows(&g, h).unwrap().arrows() {
            let bigger = g.with_vertex(0).unwrap();
            prop_assert!(arrows(&bigger, h).unwrap().arrows());
        }
    }

    #[test]
    fn pruned_prefixes_stay_rainbow(g in arb_graph(4, 8), t in 0usize..5, seed in any::<u64>()) {
        let h = &targets()[t];
        prop_assume!(h.order() <= g.order());
        let mut rng = StdRng::seed_from_u64(seed);
        for prefix in sample_pruned_prefixes(&g, h, &ArrowOptions::default(), 20).unwrap() {
            for _ in 0..5 {
                // random proper completion, possibly with brand-new colors
                let mut c: Vec<usize> = prefix.iter().map(|x| x.unwrap_or(usize::MAX)).collect();
                for v in 0..g.order() {
                    if c[v] == usize::MAX {
                        let mut x = rng.gen_range(0..g.order() + 2);
                        while g.neighbors(v).any(|u| c[u] == x) {
                            x += 1;
                        }
                        c[v] = x;
                    }
                }
                prop_assert!(find_rainbow_copy(&g, &c, h, None).unwrap().is_some());
            }
        }
    }
}

#[test]
fn parallel_matches_sequential() {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    let par = ArrowOptions { parallel: true, ..ArrowOptions::default() };
    for _ in 0..150 {
        let n = rng.gen_range(5..=10);
        let g = graph_from_code(n, rng.gen::<u64>() & ((1u64 << (n * (n - 1) / 2)) - 1));
        for h in targets() {
            let seq = arrows(&g, &h).unwrap();
            let p = pool.install(|| arrows_with(&g, &h, &par)).unwrap();
            assert_eq!(seq.verdict, p.verdict);
            assert_eq!(seq.bad_coloring, p.bad_coloring);
            let again = arrows(&g, &h).unwrap();
            assert_eq!(seq.bad_coloring, again.bad_coloring);
        }
    }
    let r = ReplicationStructure::new(&path(5).unwrap(), &[1, 2, 2, 1, 3]).unwrap();
    let seq = arrows_replication(&r).unwrap();
    let p = pool.install(|| arrows_replication_with(&r, &par)).unwrap();
    assert_eq!(seq.bad_coloring, p.bad_coloring);
}

/// Small bases with size vectors of total at most 8.
fn replication_cases() -> Vec<ReplicationStructure> {
    let mut out = Vec::new();
    for n in 1..=4 {
        for code in 0u64..1 << (n * (n - 1) / 2) {
            let base = graph_from_code(n, code);
            let mut sizes = vec![1; n];
            loop {
                if sizes.iter().sum::<usize>() <= 8 {
                    out.push(ReplicationStructure::new(&base, &sizes).unwrap());
                }
                // odometer over sizes 1..=3
                let Some(i) = sizes.iter().position(|&s| s < 3) else { break };
                sizes[i] += 1;
                for s in &mut sizes[..i] {
                    *s = 1;
                }
            }
        }
    }
    out
}

#[test]
fn replication_agrees_with_oracle() {
    for r in replication_cases() {
        let cert = arrows_replication(&r).unwrap();
        assert_eq!(cert.arrows(), oracle_arrows_replication(&r).unwrap(), "{:?} {:?}", r.base(), r.sizes());
        if let Some(c) = &cert.bad_coloring {
            assert_eq!(find_rainbow_transversal(&r, c).unwrap(), None);
        }
    }
}

#[test]
fn demanded_transversals_agree_with_oracle() {
    for n in 1..=5 {
        for code in 0u64..1 << (n * (n - 1) / 2) {
            let h = graph_from_code(n, code);
            let c = replication_clique_construction(&h, &BlockOrdering::IncreasingSize).unwrap();
            if c.total() > 8 {
                continue;
            }
            let r = &c.structure;
            let cert = arrows_replication(r).unwrap();
            assert_eq!(cert.arrows(), oracle_arrows_replication(r).unwrap(), "h = {h:?}");
            assert!(cert.arrows(), "construction arrows its base: {h:?}");
        }
    }
}

#[test]
fn transversals_embed_the_base() {
    let mut rng = StdRng::seed_from_u64(11);
    let h = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
    let c = replication_clique_construction(&h, &BlockOrdering::IncreasingSize).unwrap();
    let g = c.structure.expanded();
    for _ in 0..200 {
        let mut col = vec![usize::MAX; g.order()];
        for v in 0..g.order() {
            let mut x = rng.gen_range(0..g.order());
            while g.neighbors(v).any(|u| col[u] == x) {
                x = (x + 1) % (2 * g.order());
            }
            col[v] = x;
        }
        let t = find_rainbow_transversal(&c.structure, &col).unwrap().expect("construction arrows");
        let emb = c.embedding_from(&t).unwrap();
        assert_eq!(g.relabel(&emb), h);
    }
}

#[test]
fn nonedge_construction_arrows_its_base() {
    for n in 1..=4 {
        for code in 0u64..1 << (n * (n - 1) / 2) {
            let h = graph_from_code(n, code);
            let r = nonedge_construction(&h, None).unwrap();
            assert!(arrows(r.expanded(), &h).unwrap().arrows(), "{h:?}");
            assert!(arrows_replication(&r).unwrap().arrows(), "{h:?}");
        }
    }
}
