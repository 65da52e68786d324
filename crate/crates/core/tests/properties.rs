use std::collections::BTreeSet;

use maxtsp::graph::{is_vertex_disjoint_paths, CompleteGraph, EdgeId, Weight};
use maxtsp::harness::certificate::{build_certificate, verify_certificate};
use maxtsp::harness::io::{parse_instance, write_instance};
use maxtsp::harness::oracle::{oracle_max_tsp, oracle_perfect_b_matching, oracle_perfect_matching};
use maxtsp::matching::{max_weight_perfect_b_matching, max_weight_perfect_matching, DegreeDemand, GeneralGraph};
use maxtsp::pipeline::run_pipeline;
use maxtsp::tour::{expand_tour, is_permutation, patch_paths_to_tour, shrink_edge, solve, tour_weight, SolveOptions};
use proptest::prelude::*;

fn complete(n: std::ops::RangeInclusive<usize>, hi: Weight) -> impl Strategy<Value = CompleteGraph> {
    n.prop_flat_map(move |n| {
        prop::collection::vec(0..=hi, n * (n - 1) / 2).prop_map(move |tri| CompleteGraph::from_upper_triangle(n, &tri).unwrap())
    })
}

fn sparse(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = GeneralGraph> {
    n.prop_flat_map(|n| {
        prop::collection::vec(prop::option::weighted(0.6, 0..40i64), n * (n - 1) / 2).prop_map(move |ws| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| EdgeId::new(u, v)));
            GeneralGraph::new(n, pairs.zip(ws).filter_map(|(e, w)| w.map(|w| (e, w))).collect()).unwrap()
        })
    })
}

/// Random vertex-disjoint paths: a shuffled order cut at random places.
fn path_set(n: usize) -> impl Strategy<Value = Vec<EdgeId>> {
    (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), n)).prop_map(|(order, cut)| {
        order.windows(2).zip(cut).filter(|(_, c)| !c).map(|(w, _)| EdgeId::new(w[0], w[1])).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blossom_agrees_with_enumeration(g in sparse(2..=10)) {
        let got = max_weight_perfect_matching(&g).ok().map(|m| m.weight);
        prop_assert_eq!(got, oracle_perfect_matching(&g));
    }

    #[test]
    fn b_matching_agrees_with_enumeration(g in sparse(3..=7), twos in prop::collection::vec(any::<bool>(), 7)) {
        let mut b: Vec<usize> = (0..g.n()).map(|v| 1 + usize::from(twos[v])).collect();
        if b.iter().sum::<usize>() % 2 == 1 {
            b[0] = 3 - b[0];
        }
        let d = DegreeDemand::new(b.clone()).unwrap();
        let w = g.weight_map();
        match max_weight_perfect_b_matching(&g, &d) {
            Ok(s) => {
                for (v, &want) in b.iter().enumerate() {
                    prop_assert_eq!(s.iter().filter(|e| e.contains(v)).count(), want);
                }
                prop_assert_eq!(Some(s.iter().map(|e| w[e]).sum()), oracle_perfect_b_matching(&g, &d));
            }
            Err(_) => prop_assert_eq!(oracle_perfect_b_matching(&g, &d), None),
        }
    }

    #[test]
    fn solve_returns_a_tour_within_four_fifths(g in complete(3..=11, 60)) {
        let sol = solve(&g, SolveOptions::default()).unwrap();
        prop_assert!(is_permutation(&sol.tour.order, g.n()));
        prop_assert_eq!(tour_weight(&g, &sol.tour.order), sol.tour.weight);
        let opt = oracle_max_tsp(&g).unwrap();
        prop_assert!(5 * sol.tour.weight >= 4 * opt, "5 * {} < 4 * {}", sol.tour.weight, opt);
        let cert = build_certificate(&g, &sol, false);
        let rep = verify_certificate(&g, &cert);
        prop_assert!(rep.all_ok(), "{:?}", rep.failed());
    }

    #[test]
    fn pipeline_invariants(g in (3usize..=6).prop_flat_map(|h| complete(2 * h..=2 * h, 30))) {
        let run = run_pipeline(&g).unwrap();
        let n = g.n();
        prop_assert!(run.cover_violations.is_empty(), "{:?}", run.cover_violations);
        prop_assert!(run.f12.all_ok(), "{:?}", run.f12.failed());
        for (k, es) in &run.classes {
            prop_assert!(is_vertex_disjoint_paths(es, n), "class {}", k);
        }
        let l = &run.ledger;
        prop_assert_eq!(l.classes.iter().map(|c| c.1).sum::<Weight>(), l.g1_total + l.g2_total);
        prop_assert!(5 * l.best_weight >= l.g1_total + l.g2_total);
        prop_assert!(l.tour >= l.best_weight);
        prop_assert!(2 * l.z >= l.z1 + l.z2);
        prop_assert!(l.cmax >= l.matching);
    }

    #[test]
    fn patching_keeps_every_path_edge((g, paths) in (4usize..=12).prop_flat_map(|n| (complete(n..=n, 50), path_set(n)))) {
        let t = patch_paths_to_tour(&paths, &g).unwrap();
        prop_assert!(is_permutation(&t.order, g.n()));
        let te: BTreeSet<EdgeId> = t.edges().into_iter().collect();
        prop_assert!(paths.iter().all(|e| te.contains(e)));
        prop_assert!(t.weight >= g.edges_weight(&paths));
    }

    #[test]
    fn shrink_then_expand_is_a_tour(g in complete(5..=9, 40), pick in any::<prop::sample::Index>()) {
        let edges: Vec<EdgeId> = g.edges().collect();
        let e = edges[pick.index(edges.len())];
        let h = shrink_edge(&g, e).unwrap();
        prop_assert_eq!(h.n(), g.n() - 1);
        let order: Vec<usize> = (0..h.n()).collect();
        let t = expand_tour(&g, &order, e);
        prop_assert!(is_permutation(&t.order, g.n()));
        prop_assert!(t.edges().contains(&e));
        // The better of the two ways to put v back beside u.
        let old: Vec<usize> = order.iter().map(|&x| if x < e.v() { x } else { x + 1 }).collect();
        let at = old.iter().position(|&x| x == e.u()).unwrap();
        let best = [at, at + 1]
            .iter()
            .map(|&i| {
                let mut o = old.clone();
                o.insert(i, e.v());
                tour_weight(&g, &o)
            })
            .max()
            .unwrap();
        prop_assert_eq!(t.weight, best);
    }

    #[test]
    fn instance_text_round_trips(g in complete(3..=12, 1_000_000)) {
        let text = write_instance(&g);
        prop_assert_eq!(parse_instance(&text).unwrap(), g);
    }

    #[test]
    fn paths_check_matches_definition(paths in (3usize..=9).prop_flat_map(path_set), extra in (0usize..9, 0usize..9)) {
        let n = 9;
        prop_assert!(is_vertex_disjoint_paths(&paths, n));
        let e = EdgeId::try_new(extra.0, extra.1);
        if let Some(e) = e.filter(|e| !paths.contains(e)) {
            let mut more = paths.clone();
            more.push(e);
            let mut deg = vec![0; n];
            for x in &more {
                deg[x.u()] += 1;
                deg[x.v()] += 1;
            }
            // Adding an edge either keeps a path set or creates a branch or a cycle.
            let branch = deg.iter().any(|&d| d > 2);
            let ok = is_vertex_disjoint_paths(&more, n);
            prop_assert!(!(ok && branch));
            if !branch && !ok {
                prop_assert!(more.len() >= 3);
            }
        }
    }
}
