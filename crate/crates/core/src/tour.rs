//! Color class selection, patching into a tour and the odd-n wrapper.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::Color;
use crate::error::{Error, Result};
use crate::graph::{is_vertex_disjoint_paths, CompleteGraph, EdgeId, Weight};
use crate::harness::oracle::best_hamiltonian_cycle;
use crate::pipeline::{run_pipeline, PipelineRun};

/// Up to this size tours are enumerated. On four vertices C_max is a single
/// square holding both matching edges, so no kite-free cover exists.
pub const SMALL: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tour {
    pub order: Vec<usize>,
    pub weight: Weight,
}

impl Tour {
    pub fn from_order(g: &CompleteGraph, order: Vec<usize>) -> Self {
        let weight = tour_weight(g, &order);
        Tour { order, weight }
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        let k = self.order.len();
        (0..k).filter_map(|i| EdgeId::try_new(self.order[i], self.order[(i + 1) % k])).collect()
    }
}

pub fn tour_weight(g: &CompleteGraph, order: &[usize]) -> Weight {
    let k = order.len();
    if k < 2 {
        return 0;
    }
    (0..k).map(|i| g.w(order[i], order[(i + 1) % k])).sum()
}

/// Whether `order` visits each of `0..n` exactly once.
pub fn is_permutation(order: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    order.len() == n && order.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
}

/// The heaviest class, ties to the lowest color.
pub fn select_best_class(classes: &[(Color, Vec<EdgeId>)], g: &CompleteGraph) -> (Color, Vec<EdgeId>, Weight) {
    let mut best: Option<(Color, Vec<EdgeId>, Weight)> = None;
    let mut sorted: Vec<&(Color, Vec<EdgeId>)> = classes.iter().collect();
    sorted.sort_by_key(|c| c.0);
    for (k, es) in sorted {
        let w = g.edges_weight(es);
        if best.as_ref().is_none_or(|b| w > b.2) {
            best = Some((*k, es.clone(), w));
        }
    }
    best.unwrap_or((0, Vec::new(), 0))
}

/// Joins vertex-disjoint paths into one tour, always adding the heaviest
/// edge between ends of two different paths.
pub fn patch_paths_to_tour(paths: &[EdgeId], g: &CompleteGraph) -> Result<Tour> {
    let n = g.n();
    if !is_vertex_disjoint_paths(paths, n) {
        return Err(Error::Precondition("edge set is not a set of vertex-disjoint paths".into()));
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in paths {
        adj[e.u()].push(e.v());
        adj[e.v()].push(e.u());
    }
    // Each path as a vertex sequence.
    let mut seen = vec![false; n];
    let mut seqs: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if seen[s] || adj[s].len() == 2 {
            continue;
        }
        let mut seq = vec![s];
        seen[s] = true;
        let mut cur = s;
        while let Some(&x) = adj[cur].iter().find(|&&x| !seen[x]) {
            seen[x] = true;
            seq.push(x);
            cur = x;
        }
        seqs.push(seq);
    }
    while seqs.len() > 1 {
        let mut best: Option<(Weight, std::cmp::Reverse<(usize, usize)>, usize, bool, usize, bool)> = None;
        for i in 0..seqs.len() {
            for j in i + 1..seqs.len() {
                for (ai, a_end) in [(false, seqs[i][0]), (true, *seqs[i].last().unwrap())] {
                    for (bj, b_end) in [(false, seqs[j][0]), (true, *seqs[j].last().unwrap())] {
                        let e = EdgeId::new(a_end, b_end);
                        let cand = (g.w(a_end, b_end), std::cmp::Reverse((e.u(), e.v())), i, ai, j, bj);
                        if best.as_ref().is_none_or(|b| (cand.0, cand.1) > (b.0, b.1)) {
                            best = Some(cand);
                        }
                    }
                }
            }
        }
        let (_, _, i, a_last, j, b_last) = best.unwrap();
        let mut b = seqs.remove(j);
        let a = &mut seqs[i];
        if !a_last {
            a.reverse();
        }
        if b_last {
            b.reverse();
        }
        a.extend(b);
    }
    let order = seqs.pop().unwrap_or_default();
    Ok(Tour::from_order(g, order))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// For odd n, shrink only the heaviest edge.
    pub fast_odd: bool,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub tour: Tour,
    /// The even instance actually run, with the edge shrunk to get it.
    pub run: Option<PipelineRun>,
    pub shrunk: Option<EdgeId>,
}

/// Merges `e.v()` into `e.u()`; vertex `e.v()` disappears and later vertices
/// shift down by one.
pub fn shrink_edge(g: &CompleteGraph, e: EdgeId) -> Result<CompleteGraph> {
    let (u, v) = (e.u(), e.v());
    let old = |x: usize| if x < v { x } else { x + 1 };
    CompleteGraph::from_fn(g.n() - 1, |a, b| {
        let (a, b) = (old(a), old(b));
        match (a == u, b == u) {
            (true, false) => g.w(u, b).max(g.w(v, b)),
            (false, true) => g.w(a, u).max(g.w(a, v)),
            _ => g.w(a, b),
        }
    })
}

/// Puts the shrunk edge back at the position of its merged vertex, in the
/// better of the two directions.
pub fn expand_tour(g: &CompleteGraph, shrunk_order: &[usize], e: EdgeId) -> Tour {
    let (u, v) = (e.u(), e.v());
    let old = |x: usize| if x < v { x } else { x + 1 };
    let order: Vec<usize> = shrunk_order.iter().map(|&x| old(x)).collect();
    let pos = order.iter().position(|&x| x == u).unwrap();
    let mut a = order.clone();
    a.insert(pos + 1, v);
    let mut b = order;
    b.insert(pos, v);
    let (ta, tb) = (Tour::from_order(g, a), Tour::from_order(g, b));
    if tb.weight > ta.weight {
        tb
    } else {
        ta
    }
}

pub fn solve(g: &CompleteGraph, opts: SolveOptions) -> Result<Solution> {
    let n = g.n();
    if n < 3 {
        return Err(Error::Instance(format!("need at least 3 vertices, got {n}")));
    }
    if n <= SMALL {
        let all: Vec<usize> = (0..n).collect();
        let (_, order) = best_hamiltonian_cycle(g, &all);
        return Ok(Solution { tour: Tour::from_order(g, order), run: None, shrunk: None });
    }
    if n.is_multiple_of(2) {
        let run = run_pipeline(g)?;
        return Ok(Solution { tour: run.tour.clone(), run: Some(run), shrunk: None });
    }
    let candidates: Vec<EdgeId> = if opts.fast_odd {
        let e = g.edges().max_by_key(|&e| (g.weight(e), std::cmp::Reverse(e))).unwrap();
        vec![e]
    } else {
        g.edges().collect()
    };
    let results: Vec<Result<(Tour, EdgeId, PipelineRun)>> = candidates
        .par_iter()
        .map(|&e| {
            let h = shrink_edge(g, e)?;
            let run = run_pipeline(&h)?;
            Ok((expand_tour(g, &run.tour.order, e), e, run))
        })
        .collect();
    let mut best: Option<(Tour, EdgeId, PipelineRun)> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.0.weight > b.0.weight) {
            best = Some(r);
        }
    }
    let (tour, e, run) = best.unwrap();
    Ok(Solution { tour, run: Some(run), shrunk: Some(e) })
}
