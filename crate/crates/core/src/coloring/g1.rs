//! Path-3-coloring of G₁ = 2·C_max + M, leaving kites and tails uncolored.
//!
//! Cycles are handled one at a time, fewest uncolored external matching edges
//! first. The external edges of the chosen cycle are colored first so that no
//! unproblematic cycle becomes blocked, then the cycle itself. A tail (the
//! matching edge from a foot to an unproblematic cycle) stays uncolored but
//! gets a virtual color at its outer endpoint, used only while that cycle is
//! colored.

use std::collections::{BTreeMap, BTreeSet};

use super::search::{Order, Outcome, Search, Step};
use super::state::{bit, Color, ColorMask, ColorState, K3};
use crate::cycle_cover::{cycle_stats, is_blocked, Kite, KiteKind};
use crate::error::{Error, Result};
use crate::graph::{CycleCover, EdgeId};
use crate::matching::Matching;

const ALL: ColorMask = 0b1110;
const EXTERNAL_BUDGET: u64 = 20_000;
const RING_BUDGET: u64 = 50_000;
const GLOBAL_BUDGET: u64 = 2_000_000;
const MAX_CHORD_COMBOS: usize = 27;
const MAX_CASE1_PAIRS: usize = 64;

#[derive(Clone, Debug)]
pub struct G1Coloring {
    pub state: ColorState,
    /// Outer endpoint of a tail → the color assumed for it.
    pub virtual_tail: BTreeMap<usize, Color>,
    /// One line per colored cycle naming the construction used.
    pub trace: Vec<String>,
    /// Times a search replaced the direct construction.
    pub fallbacks: usize,
}

/// Requirement of every edge of G₁: two per cover edge plus one per matching edge.
pub fn g1_requirements(cmax: &CycleCover, m: &Matching) -> Vec<(EdgeId, u8)> {
    let mut req: BTreeMap<EdgeId, u8> = BTreeMap::new();
    for e in cmax.edges() {
        *req.entry(e).or_default() += 2;
    }
    for &e in &m.pairs {
        *req.entry(e).or_default() += 1;
    }
    req.into_iter().collect()
}

/// The uncolored cycle with the fewest uncolored external edges, ties to the
/// smallest minimum vertex.
pub fn order_cycles_for_coloring(cycles: &[Vec<usize>], candidates: &[usize], uncolored_ext: impl Fn(usize) -> usize) -> Option<usize> {
    candidates.iter().copied().min_by_key(|&c| (uncolored_ext(c), cycles[c].iter().min().copied().unwrap_or(0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MAt {
    /// The matching edge is a cover edge of the same cycle.
    OnCycle,
    Chord(EdgeId),
    External(EdgeId),
    Tail,
    /// Matching edge to a kite from a kite.
    KiteSide,
}

struct Ctx<'a> {
    cycles: &'a [Vec<usize>],
    cyc_of: Vec<usize>,
    problematic: Vec<bool>,
    mates: Vec<usize>,
    state: ColorState,
    tau: Vec<Option<Color>>,
    colored: Vec<bool>,
    trace: Vec<String>,
    fallbacks: usize,
}

impl Ctx<'_> {
    fn m_at(&self, v: usize) -> MAt {
        let x = self.mates[v];
        let (cv, cx) = (self.cyc_of[v], self.cyc_of[x]);
        if self.problematic[cv] {
            return MAt::KiteSide;
        }
        if cv == cx {
            let c = &self.cycles[cv];
            let i = c.iter().position(|&y| y == v).unwrap();
            let l = c.len();
            if c[(i + 1) % l] == x || c[(i + l - 1) % l] == x {
                MAt::OnCycle
            } else {
                MAt::Chord(EdgeId::new(v, x))
            }
        } else if self.problematic[cx] {
            MAt::Tail
        } else {
            MAt::External(EdgeId::new(v, x))
        }
    }

    /// Color of the matching edge at `v` as seen by the cycle coloring.
    fn m_color(&self, v: usize) -> Option<Color> {
        match self.m_at(v) {
            MAt::Chord(e) | MAt::External(e) => self.state.single_color(e),
            MAt::Tail => self.tau[v],
            MAt::OnCycle | MAt::KiteSide => None,
        }
    }

    fn ext_color(&self, e: EdgeId) -> Option<Color> {
        if let Some(k) = self.state.single_color(e) {
            return Some(k);
        }
        let (a, b) = (e.u(), e.v());
        match (self.problematic[self.cyc_of[a]], self.problematic[self.cyc_of[b]]) {
            (false, true) => self.tau[a],
            (true, false) => self.tau[b],
            _ => None,
        }
    }

    fn uncolored_externals(&self, c: usize) -> usize {
        self.cycles[c]
            .iter()
            .filter(|&&v| match self.m_at(v) {
                MAt::External(e) => self.state.single_color(e).is_none(),
                MAt::Tail => self.tau[v].is_none(),
                _ => false,
            })
            .count()
    }

    fn blocked(&self, c: usize) -> bool {
        let cyc = &self.cycles[c];
        let col = |e: EdgeId| self.ext_color(e);
        let stats = cycle_stats(cyc, &self.mates, col);
        is_blocked(cyc, &self.mates, stats, col).unwrap_or(false)
    }

    fn flex_col(&self, c: usize) -> usize {
        let s = cycle_stats(&self.cycles[c], &self.mates, |e| self.ext_color(e));
        s.flex + s.col
    }

    fn present_colors(&self, c: usize) -> ColorMask {
        self.cycles[c].iter().filter_map(|&v| self.m_color(v)).fold(0, |m, k| m | bit(k))
    }
}

#[derive(Clone, Copy)]
enum ExtVar {
    Edge(usize, usize),
    Tail(usize),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    Flexible,
    NonBlocked,
    Any,
}

fn ext_dfs(ctx: &mut Ctx, c: usize, vars: &[ExtVar], i: usize, goal: Goal, nodes: &mut u64) -> bool {
    *nodes += 1;
    if *nodes > EXTERNAL_BUDGET {
        return false;
    }
    if i == vars.len() {
        return match goal {
            Goal::Flexible => ctx.flex_col(c) >= 3 && !ctx.blocked(c),
            Goal::NonBlocked => !ctx.blocked(c),
            Goal::Any => true,
        };
    }
    let present = ctx.present_colors(c);
    let mut order: Vec<Color> = K3.iter().copied().filter(|&k| present & bit(k) == 0).collect();
    order.extend(K3.iter().copied().filter(|&k| present & bit(k) != 0));
    match vars[i] {
        ExtVar::Edge(idx, other) => {
            for k in order {
                let cp = ctx.state.checkpoint();
                if ctx.state.add(idx, k).is_err() {
                    continue;
                }
                let ok = goal == Goal::Any
                    || ctx.colored[other]
                    || ctx.problematic[other]
                    || ctx.uncolored_externals(other) > 0
                    || !ctx.blocked(other);
                if ok && ext_dfs(ctx, c, vars, i + 1, goal, nodes) {
                    return true;
                }
                ctx.state.rollback(cp);
            }
        }
        ExtVar::Tail(v) => {
            // Prefer a virtual color unlike the predecessor's matching edge so
            // the two cover edges at v get different color pairs.
            let cyc = &ctx.cycles[c];
            let l = cyc.len();
            let pos = cyc.iter().position(|&y| y == v).unwrap();
            let pred = ctx.m_color(cyc[(pos + l - 1) % l]);
            let mut ord: Vec<Color> = order.iter().copied().filter(|&k| Some(k) != pred).collect();
            ord.extend(order.iter().copied().filter(|&k| Some(k) == pred));
            for k in ord {
                ctx.tau[v] = Some(k);
                if ext_dfs(ctx, c, vars, i + 1, goal, nodes) {
                    return true;
                }
                ctx.tau[v] = None;
            }
        }
    }
    false
}

fn color_externals(ctx: &mut Ctx, c: usize) -> Result<()> {
    let mut vars = Vec::new();
    for &v in &ctx.cycles[c] {
        match ctx.m_at(v) {
            MAt::External(e) if ctx.state.single_color(e).is_none() => {
                let idx = ctx.state.index_of(e).unwrap();
                vars.push(ExtVar::Edge(idx, ctx.cyc_of[ctx.mates[v]]));
            }
            MAt::Tail if ctx.tau[v].is_none() => vars.push(ExtVar::Tail(v)),
            _ => {}
        }
    }
    for goal in [Goal::Flexible, Goal::NonBlocked, Goal::Any] {
        let mut nodes = 0;
        if ext_dfs(ctx, c, &vars, 0, goal, &mut nodes) {
            if goal == Goal::Any && !vars.is_empty() {
                ctx.fallbacks += 1;
            }
            return Ok(());
        }
    }
    Err(Error::Internal(format!("no coloring of external edges at cycle {c}")))
}

/// A candidate coloring of one cycle: chord colors, then cover edge masks.
struct Candidate {
    chords: Vec<(EdgeId, Color)>,
    edges: Vec<ColorMask>,
    case: &'static str,
}

fn cycle_edge(c: &[usize], j: usize) -> EdgeId {
    EdgeId::new(c[j], c[(j + 1) % c.len()])
}

fn chord_combos(ctx: &Ctx, c: usize, chords: &[EdgeId]) -> Vec<Vec<(EdgeId, Color)>> {
    if chords.is_empty() {
        return vec![Vec::new()];
    }
    let present = ctx.present_colors(c);
    let mut missing: Vec<Color> = K3.iter().copied().filter(|&k| present & bit(k) == 0).collect();
    let first: Vec<(EdgeId, Color)> =
        chords.iter().map(|&e| (e, if missing.is_empty() { 1 } else { missing.remove(0) })).collect();
    let mut out = vec![first];
    let total = 3usize.saturating_pow(chords.len() as u32);
    for code in 0..total.min(MAX_CHORD_COMBOS) {
        let mut x = code;
        let combo: Vec<(EdgeId, Color)> = chords
            .iter()
            .map(|&e| {
                let k = (x % 3) as Color + 1;
                x /= 3;
                (e, k)
            })
            .collect();
        if combo != out[0] {
            out.push(combo);
        }
    }
    out
}

fn k3_minus(k: Option<Color>) -> ColorMask {
    match k {
        Some(k) => ALL & !bit(k),
        None => bit(1) | bit(2),
    }
}

/// Tries one candidate; on success leaves it applied.
fn apply(ctx: &mut Ctx, c: usize, cand: &Candidate) -> bool {
    let cyc = &ctx.cycles[c];
    let cp = ctx.state.checkpoint();
    for &(e, k) in &cand.chords {
        let i = ctx.state.index_of(e).unwrap();
        if ctx.state.remaining(i) > 0 && ctx.state.add(i, k).is_err() {
            ctx.state.rollback(cp);
            return false;
        }
    }
    for (j, &m) in cand.edges.iter().enumerate() {
        let i = ctx.state.index_of(cycle_edge(cyc, j)).unwrap();
        if !ctx.state.try_add_mask(i, m) {
            ctx.state.rollback(cp);
            return false;
        }
    }
    true
}

/// Number of tail vertices whose two cover edges got the same color pair.
fn tail_clashes(ctx: &Ctx, c: usize) -> usize {
    let cyc = &ctx.cycles[c];
    let l = cyc.len();
    (0..l)
        .filter(|&j| ctx.m_at(cyc[j]) == MAt::Tail)
        .filter(|&j| {
            let a = ctx.state.colors_of(cycle_edge(cyc, (j + l - 1) % l));
            let b = ctx.state.colors_of(cycle_edge(cyc, j));
            a == b
        })
        .count()
}

/// Coloring with a fixed orientation: the edge leaving `u`
/// avoids the color of the matching edge at `u`.
fn oriented_masks(ctx: &Ctx, c: usize, chords: &[(EdgeId, Color)], forward: bool) -> Vec<ColorMask> {
    let cyc = &ctx.cycles[c];
    let l = cyc.len();
    let color_at = |v: usize| -> Option<Color> {
        match ctx.m_at(v) {
            MAt::Chord(e) => chords.iter().find(|(x, _)| *x == e).map(|&(_, k)| k).or(ctx.state.single_color(e)),
            _ => ctx.m_color(v),
        }
    };
    (0..l)
        .map(|j| {
            let e = cycle_edge(cyc, j);
            if ctx.mates[e.u()] == e.v() {
                return ALL;
            }
            let (tail, head) = if forward { (cyc[j], cyc[(j + 1) % l]) } else { (cyc[(j + 1) % l], cyc[j]) };
            match ctx.m_at(tail) {
                MAt::OnCycle => k3_minus(color_at(head)),
                _ => k3_minus(color_at(tail)),
            }
        })
        .collect()
}

fn candidates(ctx: &Ctx, c: usize) -> Vec<Candidate> {
    let cyc = &ctx.cycles[c];
    let l = cyc.len();
    let chords: Vec<EdgeId> = {
        let mut s = BTreeSet::new();
        for &v in cyc {
            if let MAt::Chord(e) = ctx.m_at(v) {
                if ctx.state.single_color(e).is_none() {
                    s.insert(e);
                }
            }
        }
        s.into_iter().collect()
    };
    let mut out = Vec::new();
    for combo in chord_combos(ctx, c, &chords) {
        for forward in [true, false] {
            out.push(Candidate { edges: oriented_masks(ctx, c, &combo, forward), chords: combo.clone(), case: "orient" });
        }
        let color_at = |v: usize| match ctx.m_at(v) {
            MAt::Chord(e) => combo.iter().find(|(x, _)| *x == e).map(|&(_, k)| k).or(ctx.state.single_color(e)),
            MAt::OnCycle | MAt::KiteSide => None,
            _ => ctx.m_color(v),
        };
        let ms: Vec<Option<Color>> = cyc.iter().map(|&v| color_at(v)).collect();
        if ms.iter().any(|x| x.is_none()) {
            continue;
        }
        let ms: Vec<Color> = ms.into_iter().map(Option::unwrap).collect();
        let used: ColorMask = ms.iter().fold(0, |m, &k| m | bit(k));
        if used.count_ones() == 1 && l >= 4 {
            // All matching edges share color k.
            let k = ms[0];
            let others: Vec<Color> = K3.iter().copied().filter(|&x| x != k).collect();
            let tail_adj = |j: usize| {
                [cyc[j], cyc[(j + 1) % l]].iter().filter(|&&v| ctx.m_at(v) == MAt::Tail).count()
            };
            let mut pairs: Vec<(usize, usize)> =
                (0..l).flat_map(|i| (i + 2..l).map(move |j| (i, j))).filter(|&(i, j)| !(i == 0 && j == l - 1)).collect();
            pairs.sort_by_key(|&(i, j)| (std::cmp::Reverse(tail_adj(i) + tail_adj(j)), i, j));
            for &(i, j) in pairs.iter().take(MAX_CASE1_PAIRS) {
                for (a, b) in [(others[0], others[1]), (others[1], others[0])] {
                    let mut edges = vec![bit(others[0]) | bit(others[1]); l];
                    edges[i] = bit(k) | bit(a);
                    edges[j] = bit(k) | bit(b);
                    out.push(Candidate { chords: combo.clone(), edges, case: "one-color" });
                }
            }
        }
        if used.count_ones() == 2 {
            for forward in [true, false] {
                let seq: Vec<usize> = if forward { (0..l).collect() } else { (0..l).rev().collect() };
                for p in 0..l {
                    let (prev, cur, next) = (seq[(p + l - 1) % l], seq[p], seq[(p + 1) % l]);
                    if ms[prev] == ms[cur] && ms[cur] != ms[next] {
                        let mut edges: Vec<ColorMask> = oriented_masks(ctx, c, &combo, forward);
                        let j = if forward { cur } else { next };
                        edges[j] = bit(ms[cur]) | bit(ms[next]);
                        out.push(Candidate { chords: combo.clone(), edges, case: "two-color" });
                    }
                }
            }
        }
    }
    out
}

fn ring_search(ctx: &mut Ctx, c: usize, strict_tails: bool) -> bool {
    let cyc = ctx.cycles[c].clone();
    let l = cyc.len();
    let mut steps = Vec::new();
    for &v in &cyc {
        if let MAt::Chord(e) = ctx.m_at(v) {
            let i = ctx.state.index_of(e).unwrap();
            if ctx.state.remaining(i) > 0 && !steps.iter().any(|s: &Step| s.edge == i) {
                steps.push(Step { edge: i, count: 1 });
            }
        }
    }
    let edge_idx: Vec<usize> = (0..l).map(|j| ctx.state.index_of(cycle_edge(&cyc, j)).unwrap()).collect();
    steps.extend(edge_idx.iter().map(|&i| Step { edge: i, count: ctx.state.remaining(i) }));
    let tails: Vec<usize> = (0..l).filter(|&j| ctx.m_at(cyc[j]) == MAt::Tail).collect();
    let mcol: Vec<Option<Color>> = cyc.iter().map(|&v| ctx.m_color(v)).collect();
    let prefer = |_: &ColorState, st: &Step| -> Vec<Color> {
        match edge_idx.iter().position(|&i| i == st.edge) {
            Some(j) => match mcol[j] {
                Some(k) => K3.iter().copied().filter(|&x| x != k).chain([k]).collect(),
                None => K3.to_vec(),
            },
            None => K3.to_vec(),
        }
    };
    let check = |s: &ColorState, _: &Step| -> bool {
        !strict_tails
            || tails.iter().all(|&j| {
                let (a, b) = (edge_idx[(j + l - 1) % l], edge_idx[j]);
                s.remaining(a) > 0 || s.remaining(b) > 0 || s.colors(a) != s.colors(b)
            })
    };
    let search = Search { order: Order::Static, prefer: &prefer, check: &check, budget: RING_BUDGET };
    search.run(&mut ctx.state, &steps).0 == Outcome::Solved
}

fn color_cycle(ctx: &mut Ctx, c: usize) -> bool {
    let mut best: Option<(usize, usize)> = None;
    let cands = candidates(ctx, c);
    for (ci, cand) in cands.iter().enumerate() {
        let cp = ctx.state.checkpoint();
        if apply(ctx, c, cand) {
            let clashes = tail_clashes(ctx, c);
            if clashes == 0 {
                ctx.trace.push(format!("cycle {c}: {}", cand.case));
                return true;
            }
            ctx.state.rollback(cp);
            if best.is_none_or(|(b, _)| clashes < b) {
                best = Some((clashes, ci));
            }
        }
    }
    if ring_search(ctx, c, true) {
        ctx.fallbacks += 1;
        ctx.trace.push(format!("cycle {c}: search"));
        return true;
    }
    if let Some((_, ci)) = best {
        let ok = apply(ctx, c, &cands[ci]);
        debug_assert!(ok);
        ctx.trace.push(format!("cycle {c}: {} with tail clash", cands[ci].case));
        return ok;
    }
    if ring_search(ctx, c, false) {
        ctx.fallbacks += 1;
        ctx.trace.push(format!("cycle {c}: search with tail clash"));
        return true;
    }
    false
}

/// Path-3-colors G₁ except kite edges and tails.
pub fn path3color_g1(n: usize, cmax: &CycleCover, m: &Matching, kites: &[Kite]) -> Result<G1Coloring> {
    let state = ColorState::new(n, &K3, g1_requirements(cmax, m))?;
    let cyc_of = cmax.cycle_of(n);
    let mut problematic = vec![false; cmax.cycles.len()];
    for k in kites {
        problematic[k.cycle] = true;
    }
    let mut ctx = Ctx {
        cycles: &cmax.cycles,
        cyc_of,
        problematic,
        mates: m.mates(n),
        state,
        tau: vec![None; n],
        colored: vec![false; cmax.cycles.len()],
        trace: Vec::new(),
        fallbacks: 0,
    };
    loop {
        let open: Vec<usize> = (0..ctx.cycles.len()).filter(|&c| !ctx.problematic[c] && !ctx.colored[c]).collect();
        let Some(c) = order_cycles_for_coloring(ctx.cycles, &open, |c| ctx.uncolored_externals(c)) else { break };
        color_externals(&mut ctx, c)?;
        if !color_cycle(&mut ctx, c) {
            ctx.trace.push(format!("cycle {c}: failed, completing by global search"));
            ctx.colored[c] = true;
            return global_fallback(ctx, kites);
        }
        ctx.colored[c] = true;
    }
    finish(ctx, kites)
}

/// Edges left for the completion: kite pairs and matching edges touching kites.
fn reserved(e: EdgeId, kite_vertex: &[bool]) -> bool {
    kite_vertex[e.u()] || kite_vertex[e.v()]
}

fn kite_vertices(n: usize, kites: &[Kite]) -> Vec<bool> {
    let mut kv = vec![false; n];
    for k in kites {
        for &v in &k.vertices {
            kv[v] = true;
        }
    }
    kv
}

fn global_fallback(mut ctx: Ctx, kites: &[Kite]) -> Result<G1Coloring> {
    let kv = kite_vertices(ctx.state.n(), kites);
    let todo: Vec<usize> = (0..ctx.state.len()).filter(|&i| !reserved(ctx.state.edge(i), &kv)).collect();
    let steps = super::search::completion_steps(&ctx.state, todo);
    let prefer = super::search::no_preference;
    let search = Search { order: Order::MostConstrained, prefer: &prefer, check: &super::search::accept_all, budget: GLOBAL_BUDGET };
    if search.run(&mut ctx.state, &steps).0 != Outcome::Solved {
        return Err(Error::Internal("G1 coloring failed".into()));
    }
    ctx.fallbacks += 1;
    finish(ctx, kites)
}

fn finish(ctx: Ctx, kites: &[Kite]) -> Result<G1Coloring> {
    let kv = kite_vertices(ctx.state.n(), kites);
    for i in 0..ctx.state.len() {
        let e = ctx.state.edge(i);
        if !reserved(e, &kv) && ctx.state.remaining(i) > 0 {
            return Err(Error::Internal(format!("edge {e:?} left uncolored in G1")));
        }
    }
    let mut virtual_tail = BTreeMap::new();
    for (v, t) in ctx.tau.iter().enumerate() {
        if let Some(k) = t {
            virtual_tail.insert(v, *k);
        }
    }
    debug_assert!(kites.iter().all(|k| k.kind == KiteKind::Four || k.foot.is_some()));
    Ok(G1Coloring { state: ctx.state, virtual_tail, trace: ctx.trace, fallbacks: ctx.fallbacks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle_cover::{find_kites, max_weight_cycle_cover, max_weight_matching_complete};
    use crate::graph::is_vertex_disjoint_paths;
    use crate::harness::generate::{generate_instance, Family};

    fn matching(pairs: &[(usize, usize)]) -> Matching {
        Matching { pairs: pairs.iter().map(|&(a, b)| EdgeId::new(a, b)).collect(), weight: 0 }
    }

    #[test]
    fn ordering_prefers_fewest_then_lowest() {
        let cycles = vec![vec![4, 5, 6], vec![0, 1, 2], vec![3, 7, 8]];
        assert_eq!(order_cycles_for_coloring(&cycles, &[0, 1, 2], |c| [1, 3, 1][c]), Some(2));
        assert_eq!(order_cycles_for_coloring(&cycles, &[0, 1], |_| 0), Some(1));
        assert_eq!(order_cycles_for_coloring(&cycles, &[], |_| 0), None);
    }

    #[test]
    fn two_triangles_with_crossing_matching() {
        let cc = CycleCover::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let m = matching(&[(0, 3), (1, 4), (2, 5)]);
        let g1 = path3color_g1(6, &cc, &m, &[]).unwrap();
        assert!(g1.state.is_complete());
        for k in K3 {
            assert!(is_vertex_disjoint_paths(&g1.state.class(k), 6));
        }
    }

    #[test]
    fn matching_edge_on_cycle_gets_all_colors() {
        let cc = CycleCover::new(6, vec![vec![0, 1, 2, 3, 4, 5]]).unwrap();
        let m = matching(&[(0, 1), (2, 5), (3, 4)]);
        let g1 = path3color_g1(6, &cc, &m, &[]).unwrap();
        assert_eq!(g1.state.colors_of(EdgeId::new(0, 1)), ALL);
        assert!(g1.state.is_complete());
    }

    #[test]
    fn one_color_square_uses_two_special_edges() {
        // Square whose four external matching edges all end up one color is
        // still colorable; check the whole instance comes out complete.
        let cc = CycleCover::new(8, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]).unwrap();
        let m = matching(&[(0, 4), (1, 5), (2, 6), (3, 7)]);
        let g1 = path3color_g1(8, &cc, &m, &[]).unwrap();
        assert!(g1.state.is_complete());
        for k in K3 {
            assert!(is_vertex_disjoint_paths(&g1.state.class(k), 8));
        }
    }

    #[test]
    fn kites_and_tails_stay_uncolored() {
        let cc = CycleCover::new(8, vec![vec![0, 1, 2], vec![3, 4, 5, 6, 7]]).unwrap();
        let m = matching(&[(1, 2), (0, 3), (4, 5), (6, 7)]);
        let kites = find_kites(&cc, &m);
        assert_eq!(kites.len(), 1);
        let g1 = path3color_g1(8, &cc, &m, &kites).unwrap();
        assert_eq!(g1.state.colors_of(EdgeId::new(0, 3)), 0);
        assert_eq!(g1.state.colors_of(EdgeId::new(1, 2)), 0);
        assert!(g1.virtual_tail.contains_key(&3));
        // The two cover edges at the tail's outer endpoint differ.
        assert_ne!(g1.state.colors_of(EdgeId::new(3, 4)), g1.state.colors_of(EdgeId::new(3, 7)));
    }

    #[test]
    fn random_instances_without_kites_color_completely() {
        for f in Family::ALL {
            for seed in 0..40 {
                for n in [6, 8, 10, 12] {
                    let g = generate_instance(f, n, seed).unwrap().graph;
                    let cc = max_weight_cycle_cover(&g).unwrap();
                    let m = max_weight_matching_complete(&g).unwrap();
                    let kites = find_kites(&cc, &m);
                    let g1 = path3color_g1(n, &cc, &m, &kites).unwrap();
                    for k in K3 {
                        assert!(is_vertex_disjoint_paths(&g1.state.class(k), n));
                    }
                    if kites.is_empty() {
                        assert!(g1.state.is_complete(), "{f} {n} {seed}");
                    }
                }
            }
        }
    }
}
