//! Maximum-weight cycle cover, kite detection and cycle classification.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{cycle_edges, CompleteGraph, CycleCover, EdgeId};
use crate::matching::{solve_priced, DegreeDemand, Matching, PricedProblem};

/// Initial candidate degree for the 2-factor pool.
const COVER_K: usize = 8;
/// Initial candidate degree for the perfect matching pool.
const MATCHING_K: usize = 4;

/// Maximum-weight 2-factor of the complete graph.
pub fn max_weight_cycle_cover(g: &CompleteGraph) -> Result<CycleCover> {
    let n = g.n();
    let demand = DegreeDemand::uniform(n, 2)?;
    let weight = |u: usize, v: usize| Some(g.w(u, v));
    let p = PricedProblem { n, demand: &demand, fixed: Vec::new(), pool: (0..n).collect(), pool_weight: &weight };
    let edges = solve_priced(&p, COVER_K).map_err(|e| Error::Internal(format!("2-factor: {e}")))?;
    CycleCover::from_edges(n, &edges)
}

/// Maximum-weight perfect matching of the complete graph (`n` even).
pub fn max_weight_matching_complete(g: &CompleteGraph) -> Result<Matching> {
    let n = g.n();
    if n % 2 == 1 {
        return Err(Error::NoPerfectMatching);
    }
    let demand = DegreeDemand::uniform(n, 1)?;
    let weight = |u: usize, v: usize| Some(g.w(u, v));
    let p = PricedProblem { n, demand: &demand, fixed: Vec::new(), pool: (0..n).collect(), pool_weight: &weight };
    let pairs: BTreeSet<EdgeId> = solve_priced(&p, MATCHING_K)?.into_iter().collect();
    let weight = g.edges_weight(&pairs);
    Ok(Matching { pairs, weight })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KiteKind {
    Three,
    Four,
}

/// A triangle of C_max with one internal matching edge, or a square with two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Kite {
    pub kind: KiteKind,
    /// Index of the cycle in the cover.
    pub cycle: usize,
    /// Cycle order. For a 3-kite the foot comes first.
    pub vertices: Vec<usize>,
    pub d_edges: Vec<EdgeId>,
    /// The 3-kite vertex whose matching edge leaves the kite.
    pub foot: Option<usize>,
}

impl Kite {
    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn cycle_edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = cycle_edges(&self.vertices).collect();
        out.sort();
        out
    }

    /// The two chords of a 4-kite; empty for 3-kites.
    pub fn diagonals(&self) -> Vec<EdgeId> {
        match self.kind {
            KiteKind::Three => Vec::new(),
            KiteKind::Four => {
                let v = &self.vertices;
                let mut d = vec![EdgeId::new(v[0], v[2]), EdgeId::new(v[1], v[3])];
                d.sort();
                d
            }
        }
    }

    /// Every pair of kite vertices.
    pub fn problematic_edges(&self) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for (i, &a) in self.vertices.iter().enumerate() {
            for &b in &self.vertices[i + 1..] {
                out.push(EdgeId::new(a, b));
            }
        }
        out.sort();
        out
    }

    /// Whether the matching edges of a 4-kite are its diagonals.
    pub fn diagonal_matched(&self) -> bool {
        self.kind == KiteKind::Four && self.d_edges == self.diagonals()
    }

    pub fn min_vertex(&self) -> usize {
        *self.vertices.iter().min().unwrap()
    }
}

/// Reports every kite of C_max with respect to `m`, in cycle order.
pub fn find_kites(cmax: &CycleCover, m: &Matching) -> Vec<Kite> {
    let mut out = Vec::new();
    for (ci, c) in cmax.cycles.iter().enumerate() {
        let inside: Vec<EdgeId> = m.pairs.iter().copied().filter(|e| c.contains(&e.u()) && c.contains(&e.v())).collect();
        match (c.len(), inside.len()) {
            (3, 1) => {
                let d = inside[0];
                let foot = *c.iter().find(|&&x| !d.contains(x)).unwrap();
                out.push(Kite {
                    kind: KiteKind::Three,
                    cycle: ci,
                    vertices: vec![foot, d.u(), d.v()],
                    d_edges: inside,
                    foot: Some(foot),
                });
            }
            (4, 2) => out.push(Kite { kind: KiteKind::Four, cycle: ci, vertices: c.clone(), d_edges: inside, foot: None }),
            _ => {}
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleStats {
    pub flex: usize,
    pub col: usize,
}

/// `flex` counts matching edges with both ends on `c`; `col` counts distinct
/// colors on colored external matching edges at `c`.
pub fn cycle_stats(c: &[usize], mates: &[usize], color: impl Fn(EdgeId) -> Option<u8>) -> CycleStats {
    let mut flex = 0;
    let mut colors = BTreeSet::new();
    for &v in c {
        let e = EdgeId::new(v, mates[v]);
        if c.contains(&mates[v]) {
            if v < mates[v] {
                flex += 1;
            }
        } else if let Some(k) = color(e) {
            colors.insert(k);
        }
    }
    CycleStats { flex, col: colors.len() }
}

/// Largest set of vertex-disjoint cycle edges whose two endpoints both carry
/// external matching edges of one common color.
pub fn disjoint_same_color_edges(c: &[usize], mates: &[usize], color: impl Fn(EdgeId) -> Option<u8>) -> usize {
    let ext = |v: usize| if c.contains(&mates[v]) { None } else { color(EdgeId::new(v, mates[v])) };
    let k = c.len();
    let good: Vec<bool> = (0..k)
        .map(|i| {
            let (a, b) = (c[i], c[(i + 1) % k]);
            matches!((ext(a), ext(b)), (Some(x), Some(y)) if x == y)
        })
        .collect();
    if good.iter().all(|&g| g) {
        return k / 2;
    }
    // Maximal runs of qualifying edges are paths; a run of L edges packs ceil(L/2).
    let start = good.iter().position(|&g| !g).unwrap();
    let (mut total, mut run) = (0usize, 0usize);
    for j in 1..=k {
        if good[(start + j) % k] {
            run += 1;
        } else {
            total += run.div_ceil(2);
            run = 0;
        }
    }
    total
}

/// Blocked-cycle test. Every external matching edge of `c` must be colored.
pub fn is_blocked(c: &[usize], mates: &[usize], stats: CycleStats, color: impl Fn(EdgeId) -> Option<u8>) -> Result<bool> {
    for &v in c {
        if !c.contains(&mates[v]) && color(EdgeId::new(v, mates[v])).is_none() {
            return Err(Error::Precondition(format!("external matching edge at {v} is uncolored")));
        }
    }
    if stats.flex + stats.col >= 3 {
        return Ok(false);
    }
    if c.len() == 4 && stats.flex == 1 {
        return Ok(false);
    }
    let need = 3 - stats.flex - stats.col;
    Ok(disjoint_same_color_edges(c, mates, color) < need)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn matching(pairs: &[(usize, usize)]) -> Matching {
        Matching { pairs: pairs.iter().map(|&(a, b)| EdgeId::new(a, b)).collect(), weight: 0 }
    }

    #[test]
    fn triangle_cover() {
        let g = CompleteGraph::from_fn(3, |u, v| (u + v) as i64).unwrap();
        let c = max_weight_cycle_cover(&g).unwrap();
        assert_eq!(c.cycles, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn k4_uniform_cover() {
        let g = CompleteGraph::from_fn(4, |_, _| 1).unwrap();
        let c = max_weight_cycle_cover(&g).unwrap();
        assert_eq!(c.cycles.len(), 1);
        assert_eq!(c.weight(&g), 4);
    }

    #[test]
    fn heavy_triangle_in_k5() {
        let g = CompleteGraph::from_fn(5, |u, v| if u < 3 && v < 3 { 10 } else { 1 }).unwrap();
        let c = max_weight_cycle_cover(&g).unwrap();
        // Enumerate: a triangle plus a 2-cycle is impossible, so the cover is a
        // single 5-cycle, which can use at most two triangle edges.
        assert_eq!(c.weight(&g), 23);
    }

    #[test]
    fn kites_found() {
        let cc = CycleCover::new(7, vec![vec![0, 1, 2], vec![3, 4, 5, 6]]).unwrap();
        let m = matching(&[(1, 2), (3, 4), (5, 6)]);
        let kites = find_kites(&cc, &m);
        assert_eq!(kites.len(), 2);
        assert_eq!(kites[0].kind, KiteKind::Three);
        assert_eq!(kites[0].foot, Some(0));
        assert_eq!(kites[1].kind, KiteKind::Four);
        assert!(!kites[1].diagonal_matched());
    }

    #[test]
    fn triangle_without_internal_matching_edge_is_not_a_kite() {
        let cc = CycleCover::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let m = matching(&[(0, 3), (1, 4), (2, 5)]);
        assert!(find_kites(&cc, &m).is_empty());
    }

    #[test]
    fn stats_and_blocking() {
        let mates = |pairs: &[(usize, usize)], n: usize| matching(pairs).mates(n);
        let colors: BTreeMap<EdgeId, u8> = BTreeMap::new();
        let ms = mates(&[(1, 2), (0, 3), (4, 5)], 6);
        let s = cycle_stats(&[0, 1, 2], &ms, |e| colors.get(&e).copied());
        assert_eq!(s, CycleStats { flex: 1, col: 0 });

        // Square, externals colored 1,2,1,3.
        let ms = mates(&[(0, 4), (1, 5), (2, 6), (3, 7)], 8);
        let col: BTreeMap<EdgeId, u8> =
            [((0, 4), 1), ((1, 5), 2), ((2, 6), 1), ((3, 7), 3)].iter().map(|&((a, b), k)| (EdgeId::new(a, b), k)).collect();
        let sq = [0, 1, 2, 3];
        let s = cycle_stats(&sq, &ms, |e| col.get(&e).copied());
        assert_eq!(s, CycleStats { flex: 0, col: 3 });
        assert!(!is_blocked(&sq, &ms, s, |e| col.get(&e).copied()).unwrap());

        // Alternating 1,2,1,2 on an even cycle is blocked.
        let col: BTreeMap<EdgeId, u8> =
            [((0, 4), 1), ((1, 5), 2), ((2, 6), 1), ((3, 7), 2)].iter().map(|&((a, b), k)| (EdgeId::new(a, b), k)).collect();
        let s = cycle_stats(&sq, &ms, |e| col.get(&e).copied());
        assert!(is_blocked(&sq, &ms, s, |e| col.get(&e).copied()).unwrap());

        // All-1 triangle is blocked; all-1 square is not.
        let ms3 = mates(&[(0, 3), (1, 4), (2, 5)], 6);
        let one = |_: EdgeId| Some(1u8);
        let s = cycle_stats(&[0, 1, 2], &ms3, one);
        assert_eq!(s.col, 1);
        assert!(is_blocked(&[0, 1, 2], &ms3, s, one).unwrap());
        let s = cycle_stats(&sq, &ms, one);
        assert!(!is_blocked(&sq, &ms, s, one).unwrap());

        // Square with one internal matching edge is never blocked.
        let ms = mates(&[(0, 1), (2, 4), (3, 5)], 6);
        let s = cycle_stats(&sq, &ms, one);
        assert_eq!(s.flex, 1);
        assert!(!is_blocked(&sq, &ms, s, one).unwrap());

        // Uncolored external edge violates the precondition.
        assert!(is_blocked(&sq, &ms, s, |_| None).is_err());
    }
}
