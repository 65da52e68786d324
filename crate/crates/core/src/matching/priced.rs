//! Perfect b-matching over a dense edge pool by delayed column generation.
//!
//! The solve starts from the `k` heaviest pool edges at every pool vertex,
//! then repeatedly prices the omitted pool edges against the optimal duals of
//! the expanded instance and adds every edge with negative reduced cost. When
//! no omitted edge prices out, the duals certify optimality over the full pool.

use std::collections::BTreeSet;

use super::{solve_b_matching, DegreeDemand, GeneralGraph};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Weight};

/// Below this many pool vertices the pool is solved in full.
const DENSE_LIMIT: usize = 24;

pub(crate) struct PricedProblem<'a> {
    pub n: usize,
    pub demand: &'a DegreeDemand,
    /// Edges that are always present.
    pub fixed: Vec<(EdgeId, Weight)>,
    /// Vertices whose pairwise edges are priced.
    pub pool: Vec<usize>,
    /// Weight of a pool pair, or `None` if the pair is not an edge.
    pub pool_weight: &'a dyn Fn(usize, usize) -> Option<Weight>,
}

impl PricedProblem<'_> {
    fn pool_pairs(&self) -> Vec<(EdgeId, Weight)> {
        let mut out = Vec::new();
        for (i, &u) in self.pool.iter().enumerate() {
            for &v in &self.pool[i + 1..] {
                if let Some(w) = (self.pool_weight)(u, v) {
                    out.push((EdgeId::new(u, v), w));
                }
            }
        }
        out
    }

    fn top_k(&self, k: usize) -> BTreeSet<EdgeId> {
        let mut out = BTreeSet::new();
        for &u in &self.pool {
            let mut nb: Vec<(Weight, usize)> =
                self.pool.iter().filter(|&&v| v != u).filter_map(|&v| (self.pool_weight)(u, v).map(|w| (w, v))).collect();
            nb.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            out.extend(nb.into_iter().take(k).map(|(_, v)| EdgeId::new(u, v)));
        }
        out
    }
}

/// Returns the selected edges of a maximum-weight perfect b-matching.
pub(crate) fn solve_priced(p: &PricedProblem, k0: usize) -> Result<Vec<EdgeId>> {
    let all = p.pool_pairs();
    let weight_of = |e: EdgeId| -> Weight { (p.pool_weight)(e.u(), e.v()).expect("pool pair") };
    let mut cand: BTreeSet<EdgeId> =
        if p.pool.len() <= DENSE_LIMIT { all.iter().map(|x| x.0).collect() } else { p.top_k(k0) };
    let mut k = k0;
    loop {
        let mut edges = p.fixed.clone();
        edges.extend(cand.iter().map(|&e| (e, weight_of(e))));
        let g = GeneralGraph::new(p.n, edges)?;
        let (sel, sol, back) = match solve_b_matching(&g, p.demand) {
            Ok(x) => x,
            Err(Error::Infeasible(msg)) => {
                if cand.len() == all.len() {
                    return Err(Error::Infeasible(msg));
                }
                k *= 2;
                cand.extend(p.top_k(k));
                if k >= p.pool.len() {
                    cand.extend(all.iter().map(|x| x.0));
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        let min_dual: Vec<i64> = (0..p.n)
            .map(|v| back.copies(v).iter().map(|&c| sol.dual[c]).min().unwrap_or(i64::MAX))
            .collect();
        let mut violators = Vec::new();
        for &(e, w) in &all {
            if cand.contains(&e) {
                continue;
            }
            let (u, v) = (e.u(), e.v());
            let bad = if p.demand.get(u) >= 2 && p.demand.get(v) >= 2 {
                4 * w > min_dual[u] + min_dual[v]
            } else {
                back.copies(u)
                    .iter()
                    .any(|&cu| back.copies(v).iter().any(|&cv| sol.slack(cu, cv, 2 * w) < 0))
            };
            if bad {
                violators.push(e);
            }
        }
        if violators.is_empty() {
            return Ok(g.edges().iter().zip(sel).filter(|(_, s)| *s).map(|(&(e, _), _)| e).collect());
        }
        cand.extend(violators);
    }
}
