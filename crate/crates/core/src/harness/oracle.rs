//! Exact exponential-time oracles for small instances.

use crate::cycle_cover::Kite;
use crate::error::{Error, Result};
use crate::graph::{CompleteGraph, CycleCover, Weight};
use crate::matching::{DegreeDemand, GeneralGraph};

pub const TSP_LIMIT: usize = 18;
pub const COVER_LIMIT: usize = 10;

const NEG: Weight = Weight::MIN / 4;

/// Maximum-weight Hamiltonian cycle through `verts` (at least 3) with the
/// cycle itself.
pub fn best_hamiltonian_cycle(g: &CompleteGraph, verts: &[usize]) -> (Weight, Vec<usize>) {
    let k = verts.len();
    assert!(k >= 3);
    // Paths start at verts[0] and visit a subset of the other k-1 vertices.
    let m = k - 1;
    let full = 1usize << m;
    let mut dp = vec![NEG; full * m];
    let mut pred = vec![u8::MAX; full * m];
    for j in 0..m {
        dp[(1 << j) * m + j] = g.w(verts[0], verts[j + 1]);
    }
    for mask in 1..full {
        for j in 0..m {
            let cur = dp[mask * m + j];
            if cur == NEG || mask & (1 << j) == 0 {
                continue;
            }
            let mut rest = !mask & (full - 1);
            while rest != 0 {
                let t = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let nm = mask | (1 << t);
                let cand = cur + g.w(verts[j + 1], verts[t + 1]);
                if cand > dp[nm * m + t] {
                    dp[nm * m + t] = cand;
                    pred[nm * m + t] = j as u8;
                }
            }
        }
    }
    let (mut best, mut last) = (NEG, 0);
    for j in 0..m {
        let v = dp[(full - 1) * m + j] + g.w(verts[j + 1], verts[0]);
        if v > best {
            best = v;
            last = j;
        }
    }
    let mut order = Vec::with_capacity(k);
    let (mut mask, mut j) = (full - 1, last);
    loop {
        order.push(verts[j + 1]);
        let p = pred[mask * m + j];
        mask &= !(1 << j);
        if p == u8::MAX {
            break;
        }
        j = p as usize;
    }
    order.push(verts[0]);
    order.reverse();
    (best, order)
}

/// Exact maximum tour weight by bitmask dynamic programming.
pub fn oracle_max_tsp(g: &CompleteGraph) -> Result<Weight> {
    Ok(oracle_max_tour(g)?.0)
}

/// Exact maximum tour together with one optimal vertex order.
pub fn oracle_max_tour(g: &CompleteGraph) -> Result<(Weight, Vec<usize>)> {
    if g.n() > TSP_LIMIT {
        return Err(Error::TooLarge(g.n()));
    }
    let verts: Vec<usize> = (0..g.n()).collect();
    Ok(best_hamiltonian_cycle(g, &verts))
}

/// Best Hamiltonian cycle weight of every vertex subset (NEG below 3 vertices).
fn subset_cycle_weights(g: &CompleteGraph) -> Vec<Weight> {
    let n = g.n();
    let full = 1usize << n;
    let mut best = vec![NEG; full];
    // Paths from the lowest vertex s of the subset.
    let mut dp = vec![NEG; full * n];
    for s in 0..n {
        for t in s + 1..n {
            dp[((1 << s) | (1 << t)) * n + t] = g.w(s, t);
        }
    }
    for mask in 1..full {
        let s = mask.trailing_zeros() as usize;
        for j in 0..n {
            let cur = dp[mask * n + j];
            if cur == NEG {
                continue;
            }
            if (mask as u64).count_ones() >= 3 {
                best[mask] = best[mask].max(cur + g.w(j, s));
            }
            for t in s + 1..n {
                if mask & (1 << t) == 0 {
                    let nm = mask | (1 << t);
                    let cand = cur + g.w(j, t);
                    if cand > dp[nm * n + t] {
                        dp[nm * n + t] = cand;
                    }
                }
            }
        }
    }
    best
}

fn mask_of(vs: &[usize]) -> usize {
    vs.iter().fold(0, |m, &v| m | (1 << v))
}

/// Exact maximum-weight cycle cover avoiding every cycle whose vertices all
/// lie inside one kite, with an optimal cover.
pub fn oracle_kite_free_cover(g: &CompleteGraph, kites: &[Kite]) -> Result<(Weight, CycleCover)> {
    let n = g.n();
    if n > COVER_LIMIT {
        return Err(Error::TooLarge(n));
    }
    let kite_masks: Vec<usize> = kites.iter().map(|k| mask_of(&k.vertices)).collect();
    let mut cyc = subset_cycle_weights(g);
    for (s, c) in cyc.iter_mut().enumerate() {
        if kite_masks.iter().any(|&km| s & !km == 0) {
            *c = NEG;
        }
    }
    let full = 1usize << n;
    let mut cov = vec![NEG; full];
    let mut choice = vec![0usize; full];
    cov[0] = 0;
    for mask in 1..full {
        let low = mask & mask.wrapping_neg();
        let rest = mask & !low;
        // Enumerate subsets of `rest`, each joined with the lowest vertex.
        let mut sub = rest;
        loop {
            let s = sub | low;
            if cyc[s] != NEG && cov[mask & !s] != NEG {
                let v = cyc[s] + cov[mask & !s];
                if v > cov[mask] {
                    cov[mask] = v;
                    choice[mask] = s;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let total = cov[full - 1];
    if total == NEG {
        return Err(Error::Infeasible("no admissible cycle cover".into()));
    }
    let mut cycles = Vec::new();
    let mut mask = full - 1;
    while mask != 0 {
        let s = choice[mask];
        let verts: Vec<usize> = (0..n).filter(|&v| s & (1 << v) != 0).collect();
        cycles.push(best_hamiltonian_cycle(g, &verts).1);
        mask &= !s;
    }
    Ok((total, CycleCover::new(n, cycles)?))
}

pub fn oracle_kite_free_cycle_cover(g: &CompleteGraph, kites: &[Kite]) -> Result<Weight> {
    Ok(oracle_kite_free_cover(g, kites)?.0)
}

/// Maximum-weight cycle cover without restrictions.
pub fn oracle_max_cycle_cover(g: &CompleteGraph) -> Result<Weight> {
    oracle_kite_free_cycle_cover(g, &[])
}

/// Maximum perfect matching weight by exhaustive enumeration, or `None`.
pub fn oracle_perfect_matching(g: &GeneralGraph) -> Option<Weight> {
    oracle_b_matching(g, &vec![1; g.n()])
}

/// Maximum perfect b-matching weight by exhaustive enumeration, or `None`.
pub fn oracle_perfect_b_matching(g: &GeneralGraph, d: &DegreeDemand) -> Option<Weight> {
    let b: Vec<usize> = (0..d.len()).map(|v| d.get(v)).collect();
    oracle_b_matching(g, &b)
}

fn oracle_b_matching(g: &GeneralGraph, b: &[usize]) -> Option<Weight> {
    // Include/exclude every edge in order; a vertex fails once its last
    // incident edge is decided with demand left over.
    fn rec(i: usize, edges: &[(usize, usize, Weight)], last: &[usize], rem: &mut [usize]) -> Option<Weight> {
        if i == edges.len() {
            return rem.iter().all(|&r| r == 0).then_some(0);
        }
        let (a, c, w) = edges[i];
        let closes = |rem: &[usize]| (last[a] == i && rem[a] > 0) || (last[c] == i && rem[c] > 0);
        let mut best = None;
        if rem[a] > 0 && rem[c] > 0 {
            rem[a] -= 1;
            rem[c] -= 1;
            if !closes(rem) {
                best = rec(i + 1, edges, last, rem).map(|x| x + w);
            }
            rem[a] += 1;
            rem[c] += 1;
        }
        if !closes(rem) {
            if let Some(x) = rec(i + 1, edges, last, rem) {
                best = Some(best.map_or(x, |b: Weight| b.max(x)));
            }
        }
        best
    }
    let edges: Vec<(usize, usize, Weight)> = g.edges().iter().map(|&(e, w)| (e.u(), e.v(), w)).collect();
    let mut last = vec![usize::MAX; g.n()];
    for (i, &(a, c, _)) in edges.iter().enumerate() {
        last[a] = i;
        last[c] = i;
    }
    if (0..g.n()).any(|v| b[v] > 0 && last[v] == usize::MAX) {
        return None;
    }
    let mut rem = b.to_vec();
    rec(0, &edges, &last, &mut rem)
}
