//! Exchange sets F₁ and F₂ between G₁ and G₂.
//!
//! Each kite picks a local option: its share Z of the half-edges, the kite
//! edges moved to F₁ and the edges moved to F₂. Options are searched
//! depth-first with the local properties checked as soon as a kite is
//! decided, the G′₂ trail properties checked once all kites of a connected
//! group are decided, and the colorings tried at the leaves.

pub mod md;
pub mod orientation;
pub mod verify;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cycle_cover::{Kite, KiteKind};
use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::g2prime::{build_g2prime, G2Input, G2Prime};
use crate::gadget::RelaxedCycleCover;
use crate::graph::{CompleteGraph, EdgeId, Weight};

pub use md::{build_md_matching, MdMatching};
pub use orientation::{build_orientations, Orientation};
pub use verify::{verify_f12, F12Report};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HalfEdgeSplit {
    pub z1: BTreeSet<EdgeId>,
    pub z2: BTreeSet<EdgeId>,
    /// The heavier side, promoted to whole edges in G₂.
    pub z: BTreeSet<EdgeId>,
}

impl HalfEdgeSplit {
    /// Puts `z` on the first side and the rest of H(C₂) on the second.
    pub fn from_choice(c2: &RelaxedCycleCover, z: BTreeSet<EdgeId>) -> Self {
        let z2 = c2.half_edge_ids().difference(&z).copied().collect();
        HalfEdgeSplit { z1: z.clone(), z2, z }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KiteChoice {
    pub kite: usize,
    pub incoming: usize,
    pub outgoing: usize,
    pub z: Vec<EdgeId>,
    pub f1: Vec<EdgeId>,
    pub f2: Vec<EdgeId>,
    pub case: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExchangePair {
    pub f1: BTreeSet<EdgeId>,
    pub f2: BTreeSet<EdgeId>,
    pub choices: Vec<KiteChoice>,
}

/// Half-edges of C₂ lying inside `k`.
pub fn kite_half_edges(c2: &RelaxedCycleCover, k: &Kite) -> Vec<EdgeId> {
    let mut out: Vec<EdgeId> = c2.half_edge_ids().into_iter().filter(|e| k.contains(e.u()) && k.contains(e.v())).collect();
    out.sort();
    out
}

/// Every half of the kite's half-edges, heaviest first.
pub fn z_options(c2: &RelaxedCycleCover, k: &Kite, g: &CompleteGraph) -> Vec<Vec<EdgeId>> {
    let h = kite_half_edges(c2, k);
    let mut out: Vec<(Weight, Vec<EdgeId>)> = Vec::new();
    for mask in 0u32..(1 << h.len()) {
        if mask.count_ones() as usize * 2 != h.len() {
            continue;
        }
        let z: Vec<EdgeId> = (0..h.len()).filter(|i| mask >> i & 1 == 1).map(|i| h[i]).collect();
        let w: Weight = z.iter().map(|&e| g.weight(e)).sum();
        out.push((w, z));
    }
    out.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    out.into_iter().map(|(_, z)| z).collect()
}

/// The split given by each kite's heaviest half.
pub fn partition_half_edges(c2: &RelaxedCycleCover, kites: &[Kite], g: &CompleteGraph) -> HalfEdgeSplit {
    let z = kites.iter().flat_map(|k| z_options(c2, k, g).into_iter().next().unwrap_or_default()).collect();
    HalfEdgeSplit::from_choice(c2, z)
}

pub struct ExchangeInput<'a> {
    pub g: &'a CompleteGraph,
    pub c2: &'a RelaxedCycleCover,
    pub kites: &'a [Kite],
    pub mates: &'a [usize],
    pub cmax_edges: &'a BTreeSet<EdgeId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub orientations: usize,
    pub nodes: u64,
    pub leaves: u64,
}

#[derive(Clone, Debug)]
pub struct ExchangeOutcome {
    pub pair: ExchangePair,
    pub split: HalfEdgeSplit,
    pub orientation: Orientation,
    pub g2: G2Prime,
    pub stats: SearchStats,
}

pub type Accept<'a> = dyn FnMut(&ExchangePair, &HalfEdgeSplit, &G2Prime, &Orientation) -> bool + 'a;

const NODE_BUDGET: u64 = 400_000;
const LEAF_BUDGET: u64 = 400;
const FLIPS: usize = 8;

#[derive(Clone, Debug)]
struct KiteOption {
    z: Vec<EdgeId>,
    f1: Vec<EdgeId>,
    out: EdgeId,
    inner: Option<EdgeId>,
    incoming: usize,
    outgoing: usize,
    case: String,
}

fn kite_options(inp: &ExchangeInput, o: &Orientation, md: Option<&MdMatching>, k: &Kite) -> Vec<KiteOption> {
    let (inc, outs) = o.kite_arcs(k);
    let sides = k.cycle_edges();
    let is_m = |e: &EdgeId| k.d_edges.contains(e);
    let whole = &inp.c2.whole_edges;
    let cut: Option<BTreeSet<usize>> =
        md.and_then(|md| k.d_edges.iter().find_map(|&d| md.cycle_for(d))).map(|c| c.iter().copied().collect());
    let mut scored: Vec<((usize, usize, usize, usize, usize, usize), KiteOption)> = Vec::new();
    for (zi, z) in z_options(inp.c2, k, inp.g).into_iter().enumerate() {
        let in_iz = |e: &EdgeId| whole.contains(e) || z.contains(e);
        let allowed: Vec<EdgeId> = sides.iter().copied().filter(|e| !(is_m(e) && in_iz(e))).collect();
        let mut f1s: Vec<Vec<EdgeId>> = allowed.iter().map(|&e| vec![e]).collect();
        if k.kind == KiteKind::Four {
            for (i, &a) in allowed.iter().enumerate() {
                f1s.extend(allowed[i + 1..].iter().map(|&b| vec![a, b]));
            }
        }
        for f1 in &f1s {
            let inners: Vec<Option<EdgeId>> = if f1.len() == 1 {
                vec![None]
            } else {
                sides.iter().copied().filter(|e| !is_m(e) && in_iz(e) && !f1.contains(e)).map(Some).collect()
            };
            for &out in &outs {
                let tail = o.tail(out).unwrap();
                for &inner in &inners {
                    let doubled = f1.iter().filter(|e| in_iz(e)).count();
                    let adjacent = usize::from(!f1.iter().any(|e| e.contains(tail)));
                    let d_edge = usize::from(!(k.kind == KiteKind::Three && f1[0] == k.d_edges[0]));
                    let cuts = usize::from(!cut.as_ref().is_some_and(|c| c.contains(&out.u()) && c.contains(&out.v())));
                    let key = (f1.len(), doubled, cuts, adjacent, d_edge, zi);
                    let case = format!(
                        "{}-kite {}/{} f1 {}{}{}",
                        if k.kind == KiteKind::Three { 3 } else { 4 },
                        inc.len(),
                        outs.len(),
                        if f1.len() == 2 { "two sides" } else if d_edge == 0 { "d-edge" } else { "side" },
                        if adjacent == 0 { " at outgoing edge" } else { "" },
                        if cuts == 0 && cut.is_some() { " cutting odd cycle" } else { "" },
                    );
                    scored.push((key, KiteOption { z: z.clone(), f1: f1.clone(), out, inner, incoming: inc.len(), outgoing: outs.len(), case }));
                }
            }
        }
    }
    scored.sort_by_key(|a| a.0);
    scored.into_iter().map(|(_, o)| o).collect()
}

enum Flow {
    Found,
    Fail,
    Abort,
}

struct Dfs<'a, 'b> {
    inp: &'a ExchangeInput<'a>,
    opts: Vec<Vec<KiteOption>>,
    order: Vec<usize>,
    group: Vec<usize>,
    vertex_group: Vec<usize>,
    kite_of: Vec<Option<usize>>,
    decided: Vec<bool>,
    chosen: Vec<usize>,
    f1_at: Vec<u8>,
    f2_at: Vec<u8>,
    struct_ok: Vec<u64>,
    /// Vertices each kite's options can touch.
    reach: Vec<Vec<usize>>,
    /// Undecided kites able to touch each vertex.
    pending: Vec<u16>,
    z_weight: Weight,
    /// Heaviest possible Z weight of the kites from each position on.
    z_rest: Vec<Weight>,
    h_weight: Weight,
    stats: SearchStats,
    orientation: &'a Orientation,
    accept: &'a mut Accept<'b>,
    found: Option<(ExchangePair, HalfEdgeSplit, G2Prime)>,
}

impl Dfs<'_, '_> {
    fn apply(&mut self, k: usize, oi: usize, sign: i8) {
        let o = &self.opts[k][oi];
        let bump = |v: &mut u8| {
            if sign > 0 {
                *v += 1
            } else {
                *v -= 1
            }
        };
        for e in &o.f1 {
            e.ends().into_iter().for_each(|x| bump(&mut self.f1_at[x]));
        }
        for e in std::iter::once(&o.out).chain(o.inner.iter()) {
            e.ends().into_iter().for_each(|x| bump(&mut self.f2_at[x]));
        }
        for &v in &self.reach[k] {
            if sign > 0 {
                self.pending[v] -= 1;
            } else {
                self.pending[v] += 1;
            }
        }
        let w = self.inp.g.edges_weight(&o.z);
        if sign > 0 {
            self.z_weight += w;
        } else {
            self.z_weight -= w;
        }
        self.decided[k] = sign > 0;
        self.chosen[k] = oi;
    }

    fn f2_edges_at(&self, v: usize) -> usize {
        self.f2_at[v] as usize
    }

    fn local_ok(&self, k: usize, oi: usize) -> bool {
        let o = &self.opts[k][oi];
        let mut touched: BTreeSet<usize> = self.inp.kites[k].vertices.iter().copied().collect();
        touched.extend(o.out.ends());
        let kites = self.inp.kites;
        for &x in &touched {
            let f2 = self.f2_at[x];
            match self.kite_of[x] {
                None if f2 > 1 => return false,
                Some(t) if self.decided[t] && f2 > self.f1_at[x] + 1 => return false,
                Some(t) if kites[t].foot == Some(x) && f2 > 1 => return false,
                _ => {}
            }
            if let Some(t) = self.kite_of[x] {
                let kt = &kites[t];
                if kt.kind == KiteKind::Three && self.decided[t] {
                    let incident: usize = kt.vertices.iter().map(|&v| self.f2_edges_at(v)).sum();
                    let foot = kt.foot.unwrap();
                    if incident >= 4 && !self.opts[t][self.chosen[t]].f1.iter().any(|e| e.contains(foot)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn current(&self) -> (ExchangePair, HalfEdgeSplit) {
        let mut pair = ExchangePair::default();
        let mut z = BTreeSet::new();
        for k in (0..self.inp.kites.len()).filter(|&k| self.decided[k]) {
            let o = &self.opts[k][self.chosen[k]];
            pair.f1.extend(o.f1.iter().copied());
            pair.f2.insert(o.out);
            pair.f2.extend(o.inner);
            z.extend(o.z.iter().copied());
            pair.choices.push(KiteChoice {
                kite: k,
                incoming: o.incoming,
                outgoing: o.outgoing,
                z: o.z.clone(),
                f1: o.f1.clone(),
                f2: std::iter::once(o.out).chain(o.inner).collect(),
                case: o.case.clone(),
            });
        }
        (pair, HalfEdgeSplit::from_choice(self.inp.c2, z))
    }

    fn build(&self, pair: &ExchangePair, split: &HalfEdgeSplit, upto: usize) -> Option<G2Prime> {
        self.build_in(pair, split, &|v| self.vertex_group[v] <= upto)
    }

    fn build_in(&self, pair: &ExchangePair, split: &HalfEdgeSplit, scope: &dyn Fn(usize) -> bool) -> Option<G2Prime> {
        let inp = G2Input { n: self.inp.g.n(), c2: self.inp.c2, z: &split.z, f1: &pair.f1, f2: &pair.f2, mates: self.inp.mates };
        let g2 = build_g2prime(&inp, scope).ok()?;
        g2.violations(scope).is_empty().then_some(g2)
    }

    /// Checks the trails of the current group that no undecided kite can
    /// still change.
    fn settled_ok(&self, g: usize) -> bool {
        let (pair, split) = self.current();
        self.build_in(&pair, &split, &|v| self.vertex_group[v] <= g && self.pending[v] == 0).is_some()
    }

    fn over_budget(&self) -> bool {
        self.stats.nodes > NODE_BUDGET || self.stats.leaves > LEAF_BUDGET
    }

    fn group_done(&mut self, pos: usize) -> Flow {
        let g = if pos == 0 && self.order.is_empty() { 0 } else { self.group[self.order[pos - 1]] };
        let (pair, split) = self.current();
        let Some(g2) = self.build(&pair, &split, g) else { return Flow::Fail };
        self.struct_ok[g] += 1;
        // Z must keep at least half the weight of H overall.
        if 2 * (self.z_weight + self.z_rest[pos]) < self.h_weight {
            return Flow::Fail;
        }
        if pos == self.order.len() {
            self.stats.leaves += 1;
            if (self.accept)(&pair, &split, &g2, self.orientation) {
                self.found = Some((pair, split, g2));
                return Flow::Found;
            }
            return if self.over_budget() { Flow::Abort } else { Flow::Fail };
        }
        let next = self.group[self.order[pos]];
        self.struct_ok[next] = 0;
        match self.dfs(pos) {
            Flow::Fail if self.struct_ok[next] == 0 => Flow::Abort,
            r => r,
        }
    }

    fn dfs(&mut self, pos: usize) -> Flow {
        let k = self.order[pos];
        for oi in 0..self.opts[k].len() {
            self.stats.nodes += 1;
            if self.over_budget() {
                return Flow::Abort;
            }
            self.apply(k, oi, 1);
            let last_in_group = pos + 1 == self.order.len() || self.group[self.order[pos + 1]] != self.group[k];
            if self.local_ok(k, oi) && (last_in_group || self.settled_ok(self.group[k])) {
                let r = if last_in_group { self.group_done(pos + 1) } else { self.dfs(pos + 1) };
                match r {
                    Flow::Found => return Flow::Found,
                    Flow::Abort => {
                        self.apply(k, oi, -1);
                        return Flow::Abort;
                    }
                    Flow::Fail => {}
                }
            }
            self.apply(k, oi, -1);
        }
        Flow::Fail
    }
}

/// Groups kites whose G′₂ trails can interact: kites joined through
/// I(C₂). Returns the group of every vertex (kite-free parts get group 0)
/// and of every kite, groups numbered from 1 in order of their first kite.
fn kite_groups(c2: &RelaxedCycleCover, kites: &[Kite], n: usize) -> (Vec<usize>, Vec<usize>) {
    let mut d = Dsu::new(n);
    for e in &c2.whole_edges {
        d.union(e.u(), e.v());
    }
    for k in kites {
        for w in k.vertices.windows(2) {
            d.union(w[0], w[1]);
        }
    }
    let mut id: BTreeMap<usize, usize> = BTreeMap::new();
    let kite_group: Vec<usize> = kites
        .iter()
        .map(|k| {
            let r = d.find(k.vertices[0]);
            let next = id.len() + 1;
            *id.entry(r).or_insert(next)
        })
        .collect();
    let vertex_group = (0..n).map(|v| id.get(&d.find(v)).copied().unwrap_or(0)).collect();
    (vertex_group, kite_group)
}

/// Kites by group; inside a group each next kite is the one with most
/// I(C₂) paths to the kites already placed, so trails close early.
fn search_order(inp: &ExchangeInput, group: &[usize], kite_of: &[Option<usize>]) -> Vec<usize> {
    let n = inp.g.n();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in &inp.c2.whole_edges {
        adj[e.u()].push(e.v());
        adj[e.v()].push(e.u());
    }
    let kites = inp.kites;
    let mut links = vec![vec![0usize; kites.len()]; kites.len()];
    for (a, k) in kites.iter().enumerate() {
        for &v in &k.vertices {
            for &x in &adj[v] {
                let (mut prev, mut cur) = (v, x);
                for _ in 0..n {
                    if kite_of[cur].is_some() || adj[cur].len() != 2 {
                        break;
                    }
                    let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                    prev = cur;
                    cur = next;
                }
                if let Some(b) = kite_of[cur].filter(|&b| b != a) {
                    links[a][b] += 1;
                }
            }
        }
    }
    let mut order = Vec::with_capacity(kites.len());
    let mut placed = vec![false; kites.len()];
    let mut by_group: Vec<usize> = (0..kites.len()).collect();
    by_group.sort_by_key(|&k| (group[k], k));
    for &first in &by_group {
        if placed[first] {
            continue;
        }
        placed[first] = true;
        order.push(first);
        loop {
            let next = by_group
                .iter()
                .copied()
                .filter(|&k| !placed[k] && group[k] == group[first])
                .max_by_key(|&k| (order.iter().map(|&o| links[o][k]).sum::<usize>(), std::cmp::Reverse(k)));
            let Some(k) = next else { break };
            placed[k] = true;
            order.push(k);
        }
    }
    order
}

/// Finds F₁, F₂ and Z satisfying the exchange properties such that
/// `accept` (which runs the colorings) succeeds.
pub fn compute_exchange_sets(inp: &ExchangeInput, accept: &mut Accept) -> Result<ExchangeOutcome> {
    let n = inp.g.n();
    let d2 = build_orientations(inp.c2, inp.kites, n);
    for (i, k) in inp.kites.iter().enumerate() {
        if !d2.is_balanced(k) {
            return Err(Error::Internal(format!("kite {i} is unbalanced under the orientation")));
        }
    }
    let md = build_md_matching(inp.c2, inp.kites, n).ok();
    let mut orientations = vec![d2.clone(), d2.reversed()];
    orientations.extend((0..d2.components.min(FLIPS)).map(|c| d2.flip_component(c)));
    let (vertex_group, group) = kite_groups(inp.c2, inp.kites, n);
    let mut kite_of = vec![None; n];
    for (i, k) in inp.kites.iter().enumerate() {
        for &v in &k.vertices {
            kite_of[v] = Some(i);
        }
    }
    let order = search_order(inp, &group, &kite_of);
    let mut total = SearchStats::default();
    let mut trace = Vec::new();
    for o in orientations {
        total.orientations += 1;
        let opts: Vec<Vec<KiteOption>> = inp.kites.iter().map(|k| kite_options(inp, &o, md.as_ref(), k)).collect();
        let groups = group.iter().max().map_or(1, |g| g + 1);
        let reach: Vec<Vec<usize>> = inp
            .kites
            .iter()
            .enumerate()
            .map(|(k, kite)| {
                let mut r: BTreeSet<usize> = kite.vertices.iter().copied().collect();
                r.extend(opts[k].iter().flat_map(|x| x.out.ends()));
                r.into_iter().collect()
            })
            .collect();
        let mut pending = vec![0u16; n];
        for &v in reach.iter().flatten() {
            pending[v] += 1;
        }
        let mut z_rest = vec![0; order.len() + 1];
        for p in (0..order.len()).rev() {
            let best = opts[order[p]].iter().map(|x| inp.g.edges_weight(&x.z)).max().unwrap_or(0);
            z_rest[p] = z_rest[p + 1] + best;
        }
        let mut dfs = Dfs {
            inp,
            opts,
            order: order.clone(),
            group: group.clone(),
            vertex_group: vertex_group.clone(),
            kite_of: kite_of.clone(),
            decided: vec![false; inp.kites.len()],
            chosen: vec![0; inp.kites.len()],
            f1_at: vec![0; n],
            f2_at: vec![0; n],
            struct_ok: vec![0; groups],
            reach,
            pending,
            z_weight: 0,
            z_rest,
            h_weight: inp.g.edges_weight(&inp.c2.half_edge_ids()),
            stats: SearchStats::default(),
            orientation: &o,
            accept: &mut *accept,
            found: None,
        };
        let flow = if dfs.order.is_empty() { dfs.group_done(0) } else { dfs.dfs(0) };
        total.nodes += dfs.stats.nodes;
        total.leaves += dfs.stats.leaves;
        if let (Flow::Found, Some((pair, split, g2))) = (flow, dfs.found) {
            return Ok(ExchangeOutcome { pair, split, orientation: o, g2, stats: total });
        }
        trace.push(format!("orientation {} failed after {} nodes", total.orientations, dfs.stats.nodes));
        if inp.kites.is_empty() {
            break;
        }
    }
    let desc: Vec<String> = inp.kites.iter().map(|k| format!("{:?} {:?}", k.kind, k.vertices)).collect();
    Err(Error::UnhandledCase(format!("no exchange sets for kites [{}]: {}", desc.join(", "), trace.join("; "))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::HalfEdge;

    #[test]
    fn z_options_are_halves_heaviest_first() {
        let g = CompleteGraph::from_fn(4, |a, b| (a + b) as Weight).unwrap();
        let k = Kite {
            kind: KiteKind::Four,
            cycle: 0,
            vertices: vec![0, 1, 2, 3],
            d_edges: vec![EdgeId::new(0, 1), EdgeId::new(2, 3)],
            foot: None,
        };
        let half = [(0, 2, 0), (1, 3, 1), (0, 3, 0), (1, 2, 2)];
        let c2 = RelaxedCycleCover {
            whole_edges: BTreeSet::new(),
            half_edges: half.iter().map(|&(a, b, x)| HalfEdge::new(EdgeId::new(a, b), x)).collect(),
            weight: 0,
        };
        let opts = z_options(&c2, &k, &g);
        // Weights 2, 4, 3, 3 over four half-edges: six halves, 7 down to 5.
        assert_eq!(opts.len(), 6);
        let ws: Vec<Weight> = opts.iter().map(|z| z.iter().map(|&e| g.weight(e)).sum()).collect();
        assert!(opts.iter().all(|z| z.len() == 2));
        assert!(ws.windows(2).all(|p| p[0] >= p[1]));
        assert_eq!((ws[0], ws[5]), (7, 5));
        let split = partition_half_edges(&c2, std::slice::from_ref(&k), &g);
        assert_eq!(split.z1.len(), 2);
        assert_eq!(split.z2.len(), 2);
        assert!(split.z1.is_disjoint(&split.z2));
    }
}
