use std::collections::BTreeSet;

use maxtsp::graph::{CompleteGraph, EdgeId, Weight};
use maxtsp::harness::generate::{generate_instance, Family};
use maxtsp::harness::oracle::oracle_max_tsp;
use maxtsp::pipeline::run_pipeline;
use maxtsp::tour::{patch_paths_to_tour, solve, tour_weight, SolveOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tours_through_zero(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 1..n {
            if !cur.contains(&v) {
                cur.push(v);
                rec(n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut vec![0], &mut out);
    out
}

fn edges_of(order: &[usize]) -> BTreeSet<EdgeId> {
    (0..order.len()).map(|i| EdgeId::new(order[i], order[(i + 1) % order.len()])).collect()
}

#[test]
fn odd_five_meets_the_bound() {
    for seed in 0..100 {
        let g = generate_instance(Family::UniformRandom, 5, seed).unwrap().graph;
        let alg = solve(&g, SolveOptions::default()).unwrap().tour.weight;
        let opt = oracle_max_tsp(&g).unwrap();
        assert!(5 * alg >= 4 * opt, "seed {seed}: {alg} vs {opt}");
    }
}

#[test]
fn larger_odd_sweeps_meet_the_bound() {
    for f in Family::ALL {
        for n in [11, 13] {
            for seed in 0..2 {
                let g = generate_instance(f, n, seed).unwrap().graph;
                let sol = solve(&g, SolveOptions::default()).unwrap();
                let opt = oracle_max_tsp(&g).unwrap();
                assert!(5 * sol.tour.weight >= 4 * opt, "{f} {n} {seed}");
                assert!(sol.shrunk.is_some());
            }
        }
    }
}

#[test]
fn uniform_weights_give_the_optimum() {
    let g = CompleteGraph::from_fn(4, |_, _| 1).unwrap();
    assert_eq!(solve(&g, SolveOptions::default()).unwrap().tour.weight, 4);
    let g = CompleteGraph::from_fn(6, |_, _| 9).unwrap();
    let run = run_pipeline(&g).unwrap();
    let opt = oracle_max_tsp(&g).unwrap();
    assert_eq!(opt, 54);
    assert!(5 * run.ledger.best_weight >= 4 * opt);
    assert_eq!(run.tour.weight, opt);
}

#[test]
fn patching_two_paths_against_every_completion() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let all = tours_through_zero(6);
    for _ in 0..200 {
        let g = CompleteGraph::from_fn(6, |_, _| rng.gen_range(0..30)).unwrap();
        let mut perm: Vec<usize> = (0..6).collect();
        for i in (1..6).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let cut = rng.gen_range(1..5);
        let paths: Vec<EdgeId> =
            perm.windows(2).enumerate().filter(|&(i, _)| i + 1 != cut).map(|(_, w)| EdgeId::new(w[0], w[1])).collect();
        let t = patch_paths_to_tour(&paths, &g).unwrap();
        let te = edges_of(&t.order);
        assert!(paths.iter().all(|e| te.contains(e)));
        let completions: Vec<Weight> = all
            .iter()
            .filter(|o| paths.iter().all(|e| edges_of(o).contains(e)))
            .map(|o| tour_weight(&g, o))
            .collect();
        assert!(completions.contains(&t.weight));
        assert!(t.weight >= g.edges_weight(&paths));
    }
}

#[test]
fn single_path_is_closed() {
    let g = CompleteGraph::from_fn(5, |a, b| (a * b) as Weight).unwrap();
    let paths = [EdgeId::new(0, 1), EdgeId::new(1, 2), EdgeId::new(2, 3), EdgeId::new(3, 4)];
    let t = patch_paths_to_tour(&paths, &g).unwrap();
    assert_eq!(t.weight, g.edges_weight(&paths) + g.w(0, 4));
    let empty = patch_paths_to_tour(&[], &CompleteGraph::from_fn(4, |_, _| 2).unwrap()).unwrap();
    assert_eq!(empty.weight, 8);
}

#[test]
fn fast_odd_still_returns_a_tour() {
    let g = generate_instance(Family::MetricEuclidean, 9, 1).unwrap().graph;
    let sol = solve(&g, SolveOptions { fast_odd: true }).unwrap();
    let mut seen = sol.tour.order.clone();
    seen.sort();
    assert_eq!(seen, (0..9).collect::<Vec<_>>());
    let heaviest = g.edges().map(|e| g.weight(e)).max().unwrap();
    assert_eq!(g.weight(sol.shrunk.unwrap()), heaviest);
}
