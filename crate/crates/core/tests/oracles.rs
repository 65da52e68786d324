use maxtsp::graph::{CompleteGraph, Weight};
use maxtsp::harness::generate::{generate_instance, Family};
use maxtsp::harness::io::{parse_instance, write_instance};
use maxtsp::harness::oracle::{oracle_kite_free_cover, oracle_max_cycle_cover, oracle_max_tour, oracle_max_tsp};
use maxtsp::tour::tour_weight;
use maxtsp::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every tour through vertex 0, by plain permutation enumeration.
fn naive_max_tour(g: &CompleteGraph) -> Weight {
    fn rec(g: &CompleteGraph, path: &mut Vec<usize>, used: &mut [bool], best: &mut Weight) {
        let n = g.n();
        if path.len() == n {
            *best = (*best).max(tour_weight(g, path));
            return;
        }
        for v in 1..n {
            if !used[v] {
                used[v] = true;
                path.push(v);
                rec(g, path, used, best);
                path.pop();
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; g.n()];
    used[0] = true;
    let mut best = Weight::MIN;
    rec(g, &mut vec![0], &mut used, &mut best);
    best
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> CompleteGraph {
    let hi = if rng.gen_bool(0.3) { 3 } else { 100 };
    CompleteGraph::from_fn(n, |_, _| rng.gen_range(0..=hi)).unwrap()
}

#[test]
fn k4_example_by_enumeration() {
    let w = |u: usize, v: usize| match (u.min(v), u.max(v)) {
        (0, 1) | (2, 3) => 5,
        (0, 2) | (1, 3) => 3,
        _ => 1,
    };
    let g = CompleteGraph::from_fn(4, w).unwrap();
    // The three tours weigh 5+3+5+3, 5+1+5+1 and 3+1+3+1.
    let tours = [[0, 1, 3, 2], [0, 1, 2, 3], [0, 2, 1, 3]];
    let ws: Vec<Weight> = tours.iter().map(|t| tour_weight(&g, t)).collect();
    assert_eq!(ws, vec![16, 12, 8]);
    assert_eq!(naive_max_tour(&g), 16);
    assert_eq!(oracle_max_tsp(&g).unwrap(), 16);
}

#[test]
fn dp_matches_permutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..500 {
        let n = rng.gen_range(3..=8);
        let g = random_graph(&mut rng, n);
        let (w, t) = oracle_max_tour(&g).unwrap();
        assert_eq!(w, naive_max_tour(&g), "instance {i}");
        assert_eq!(tour_weight(&g, &t), w);
        assert_eq!(oracle_max_tsp(&g).unwrap(), w);
    }
}

#[test]
fn small_closed_forms() {
    let g = CompleteGraph::from_fn(3, |u, v| (10 * u + v) as Weight).unwrap();
    assert_eq!(oracle_max_tsp(&g).unwrap(), 1 + 2 + 12);
    for n in [3, 6, 11] {
        let g = CompleteGraph::from_fn(n, |_, _| 7).unwrap();
        assert_eq!(oracle_max_tsp(&g).unwrap(), 7 * n as Weight);
    }
}

#[test]
fn too_large_is_refused() {
    let g = CompleteGraph::from_fn(19, |_, _| 1).unwrap();
    assert!(matches!(oracle_max_tsp(&g), Err(Error::TooLarge(_))));
}

/// All cycle covers of a small graph, by recursive successor choice.
fn naive_best_cover(g: &CompleteGraph, allowed: &dyn Fn(&[usize]) -> bool) -> Option<Weight> {
    let n = g.n();
    let mut succ = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    let mut best = None;
    fn rec(
        v: usize,
        g: &CompleteGraph,
        succ: &mut Vec<usize>,
        taken: &mut Vec<bool>,
        allowed: &dyn Fn(&[usize]) -> bool,
        best: &mut Option<Weight>,
    ) {
        let n = g.n();
        if v == n {
            let mut seen = vec![false; n];
            let mut total = 0;
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                let mut c = vec![s];
                seen[s] = true;
                let mut x = succ[s];
                while x != s {
                    seen[x] = true;
                    c.push(x);
                    x = succ[x];
                }
                // Undirected covers: cycles of length at least 3, each counted once.
                if c.len() < 3 || !allowed(&c) || c[1] > c[c.len() - 1] {
                    return;
                }
                total += c.iter().zip(c.iter().cycle().skip(1)).map(|(&a, &b)| g.w(a, b)).sum::<Weight>();
            }
            *best = Some(best.map_or(total, |b: Weight| b.max(total)));
            return;
        }
        for u in 0..n {
            if u != v && !taken[u] {
                taken[u] = true;
                succ[v] = u;
                rec(v + 1, g, succ, taken, allowed, best);
                taken[u] = false;
            }
        }
    }
    rec(0, g, &mut succ, &mut taken, allowed, &mut best);
    best
}

#[test]
fn cycle_cover_oracle_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..60 {
        let n = rng.gen_range(3..=7);
        let g = random_graph(&mut rng, n);
        assert_eq!(Some(oracle_max_cycle_cover(&g).unwrap()), naive_best_cover(&g, &|_| true), "instance {i}");
    }
}

#[test]
fn kite_free_oracle_avoids_the_kite() {
    // C_max is the two heavy triangles and the matching keeps an edge inside each.
    let heavy = |u: usize, v: usize| (u < 3) == (v < 3);
    let g = CompleteGraph::from_fn(6, |u, v| if heavy(u, v) { 50 } else { (u + v) as Weight }).unwrap();
    let cc = maxtsp::cycle_cover::max_weight_cycle_cover(&g).unwrap();
    let m = maxtsp::cycle_cover::max_weight_matching_complete(&g).unwrap();
    let kites = maxtsp::cycle_cover::find_kites(&cc, &m);
    assert!(!kites.is_empty());
    let (w, cover) = oracle_kite_free_cover(&g, &kites).unwrap();
    let inside = |c: &[usize]| kites.iter().any(|k| c.iter().all(|&v| k.contains(v)));
    assert!(cover.cycles.iter().all(|c| !inside(c)));
    assert_eq!(cover.weight(&g), w);
    assert_eq!(Some(w), naive_best_cover(&g, &|c| !inside(c)));
}

#[test]
fn golden_uniform_instance() {
    let g = generate_instance(Family::UniformRandom, 6, 0).unwrap().graph;
    let text = "maxtsp 1\n6\n12 804 153 39 851\n325 73 195 81\n335 30 592\n877 532\n344\n";
    assert_eq!(write_instance(&g), text);
    assert_eq!(parse_instance(text).unwrap(), g);
    assert_eq!(oracle_max_tsp(&g).unwrap(), 3584);
    assert_eq!(naive_max_tour(&g), 3584);
}
