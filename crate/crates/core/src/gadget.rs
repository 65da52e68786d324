//! Split graph with kite gadgets and the relaxed cycle cover C₂.
//!
//! Every pair of vertices inside one kite is split by two splitting vertices
//! `x^u` and `x^v`; the half-edges `(u, x^u)` and `(v, x^v)` carry `w/2` each,
//! which on the doubled scale is `w`. Ordinary edges carry `2w`. Connectors,
//! gadget edges and their vertices carry weight 0.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cycle_cover::{Kite, KiteKind};
use crate::error::{Error, Result};
use crate::graph::{CompleteGraph, CycleCover, EdgeId, HalfEdge, Weight};
use crate::matching::{solve_priced, DegreeDemand, GeneralGraph, PricedProblem};

const SPLIT_K: usize = 8;

/// The graph G′ with its demands. Original vertices keep their indices.
#[derive(Clone, Debug)]
pub struct SplitGraph {
    n: usize,
    total: usize,
    /// Problematic edge → (splitting vertex at `e.u()`, splitting vertex at `e.v()`).
    pub split: BTreeMap<EdgeId, (usize, usize)>,
    /// Auxiliary vertices per kite: `[p, q]` for a 3-kite, `[p_x.., q]` for a
    /// 4-kite with the `p`s in kite vertex order.
    pub gadgets: Vec<Vec<usize>>,
    /// Every edge except ordinary vertex pairs, on the doubled scale.
    pub fixed: Vec<(EdgeId, Weight)>,
    pub demand: DegreeDemand,
}

impl SplitGraph {
    pub fn n_original(&self) -> usize {
        self.n
    }

    pub fn n_total(&self) -> usize {
        self.total
    }

    pub fn is_split(&self, e: EdgeId) -> bool {
        self.split.contains_key(&e)
    }

    /// The splitting vertex of `e` adjacent to `endpoint`.
    pub fn splitting_vertex(&self, e: EdgeId, endpoint: usize) -> usize {
        let (a, b) = self.split[&e];
        if endpoint == e.u() {
            a
        } else {
            b
        }
    }

    /// Doubled weight of an ordinary pair, `None` if the pair is split.
    pub fn pool_weight(&self, g: &CompleteGraph, u: usize, v: usize) -> Option<Weight> {
        (!self.is_split(EdgeId::new(u, v))).then(|| 2 * g.w(u, v))
    }

    /// Materializes the whole of G′.
    pub fn to_general_graph(&self, g: &CompleteGraph) -> Result<GeneralGraph> {
        let mut edges = self.fixed.clone();
        for e in g.edges() {
            if let Some(w) = self.pool_weight(g, e.u(), e.v()) {
                edges.push((e, w));
            }
        }
        GeneralGraph::new(self.total, edges)
    }
}

/// Builds G′ for `kites`.
pub fn build_split_graph(g: &CompleteGraph, kites: &[Kite]) -> Result<SplitGraph> {
    let n = g.n();
    let mut next = n;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let mut split = BTreeMap::new();
    let mut gadgets = Vec::with_capacity(kites.len());
    let mut fixed = Vec::new();
    let mut b = vec![2; n];
    for k in kites {
        for e in k.problematic_edges() {
            let xs = (fresh(), fresh());
            split.insert(e, xs);
            fixed.push((EdgeId::new(e.u(), xs.0), g.weight(e)));
            fixed.push((EdgeId::new(e.v(), xs.1), g.weight(e)));
            b.extend([1, 1]);
        }
        let x = |e: EdgeId, at: usize| {
            let (a, c) = split[&e];
            if at == e.u() {
                a
            } else {
                c
            }
        };
        let diagonals = k.diagonals();
        for e in k.problematic_edges() {
            if !diagonals.contains(&e) {
                fixed.push((EdgeId::new(x(e, e.u()), x(e, e.v())), 0));
            }
        }
        match k.kind {
            KiteKind::Three => {
                let (u, v, w) = (k.vertices[0], k.vertices[1], k.vertices[2]);
                let (p, q) = (fresh(), fresh());
                b.extend([1, 1]);
                let (uv, uw, vw) = (EdgeId::new(u, v), EdgeId::new(u, w), EdgeId::new(v, w));
                for s in [x(uv, u), x(uw, u), x(vw, v)] {
                    fixed.push((EdgeId::new(p, s), 0));
                }
                for s in [x(uv, v), x(vw, w), x(uw, w)] {
                    fixed.push((EdgeId::new(q, s), 0));
                }
                gadgets.push(vec![p, q]);
            }
            KiteKind::Four => {
                let ps: Vec<usize> = k.vertices.iter().map(|_| fresh()).collect();
                let q = fresh();
                b.extend([2; 5]);
                for (&xv, &p) in k.vertices.iter().zip(&ps) {
                    for &o in k.vertices.iter().filter(|&&o| o != xv) {
                        fixed.push((EdgeId::new(p, x(EdgeId::new(xv, o), xv)), 0));
                    }
                    fixed.push((EdgeId::new(p, q), 0));
                }
                let mut aux = ps;
                aux.push(q);
                gadgets.push(aux);
            }
        }
    }
    Ok(SplitGraph { n, total: next, split, gadgets, fixed, demand: DegreeDemand::new(b)? })
}

/// Whole edges I(C₂) and half-edges H(C₂). Problematic edges with both halves
/// selected are whole edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelaxedCycleCover {
    pub whole_edges: BTreeSet<EdgeId>,
    pub half_edges: BTreeSet<HalfEdge>,
    /// Doubled scale: `2 w(I) + Σ w(e)` over half-edges.
    pub weight: Weight,
}

impl RelaxedCycleCover {
    /// Edges contributing exactly one half.
    pub fn half_edge_ids(&self) -> BTreeSet<EdgeId> {
        self.half_edges.iter().map(|h| h.edge).collect()
    }

    /// Number of whole edges plus half-edges at `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.whole_edges.iter().filter(|e| e.contains(v)).count() + self.half_edges.iter().filter(|h| h.endpoint == v).count()
    }

    pub fn whole_weight(&self, g: &CompleteGraph) -> Weight {
        g.edges_weight(&self.whole_edges)
    }
}

/// Maximum-weight perfect b-matching of G′, as edges of G′.
pub fn solve_split_graph(sg: &SplitGraph, g: &CompleteGraph) -> Result<BTreeSet<EdgeId>> {
    let weight = |u: usize, v: usize| sg.pool_weight(g, u, v);
    let p = PricedProblem {
        n: sg.total,
        demand: &sg.demand,
        fixed: sg.fixed.clone(),
        pool: (0..sg.n).collect(),
        pool_weight: &weight,
    };
    match solve_priced(&p, SPLIT_K) {
        Ok(sel) => Ok(sel.into_iter().collect()),
        Err(Error::Infeasible(m)) => Err(Error::Internal(format!("split graph has no perfect b-matching: {m}"))),
        Err(e) => Err(e),
    }
}

/// Reads C₂ off a b-matching of G′.
pub fn decode_relaxed_cover(sg: &SplitGraph, g: &CompleteGraph, sel: &BTreeSet<EdgeId>) -> RelaxedCycleCover {
    let mut whole = BTreeSet::new();
    let mut half = BTreeSet::new();
    for e in sel.iter().filter(|e| e.v() < sg.n) {
        whole.insert(*e);
    }
    for (&e, &(a, c)) in &sg.split {
        let hu = sel.contains(&EdgeId::new(e.u(), a));
        let hv = sel.contains(&EdgeId::new(e.v(), c));
        match (hu, hv) {
            (true, true) => {
                whole.insert(e);
            }
            (true, false) => {
                half.insert(HalfEdge::new(e, e.u()));
            }
            (false, true) => {
                half.insert(HalfEdge::new(e, e.v()));
            }
            (false, false) => {}
        }
    }
    let weight = 2 * g.edges_weight(&whole) + half.iter().map(|h| g.weight(h.edge)).sum::<Weight>();
    RelaxedCycleCover { whole_edges: whole, half_edges: half, weight }
}

pub fn compute_relaxed_cycle_cover(sg: &SplitGraph, g: &CompleteGraph) -> Result<RelaxedCycleCover> {
    let sel = solve_split_graph(sg, g)?;
    Ok(decode_relaxed_cover(sg, g, &sel))
}

/// Counts half-edges of a kite's pairs in C₂, a whole edge counting twice.
pub fn kite_half_count(c2: &RelaxedCycleCover, k: &Kite) -> usize {
    k.problematic_edges()
        .iter()
        .map(|e| if c2.whole_edges.contains(e) { 2 } else { c2.half_edges.iter().filter(|h| h.edge == *e).count() })
        .sum()
}

/// Degree, parity and per-kite half-edge limits; one message per violation.
pub fn check_relaxed_cover(c2: &RelaxedCycleCover, kites: &[Kite], n: usize) -> Vec<String> {
    let mut out = Vec::new();
    for v in 0..n {
        let d = c2.degree(v);
        if d != 2 {
            out.push(format!("vertex {v} has {d} incident elements"));
        }
    }
    for k in kites {
        let c = kite_half_count(c2, k);
        let cap = if k.kind == KiteKind::Three { 4 } else { 6 };
        if c % 2 == 1 || c > cap {
            out.push(format!("kite {:?} has {c} half-edges", k.vertices));
        }
    }
    out
}

/// Finds a subset of `edges` meeting the residual degrees `rem` exactly.
fn exact_degree_subset(edges: &[EdgeId], rem: &mut BTreeMap<usize, usize>) -> Option<Vec<EdgeId>> {
    fn rec(i: usize, edges: &[EdgeId], rem: &mut BTreeMap<usize, usize>, chosen: &mut Vec<EdgeId>) -> bool {
        if i == edges.len() {
            return rem.values().all(|&r| r == 0);
        }
        let e = edges[i];
        let left = |rem: &BTreeMap<usize, usize>, v: usize| -> bool {
            // Remaining demand at v must fit into undecided edges.
            let avail = edges[i + 1..].iter().filter(|f| f.contains(v)).count();
            rem[&v] <= avail
        };
        if rem[&e.u()] > 0 && rem[&e.v()] > 0 {
            *rem.get_mut(&e.u()).unwrap() -= 1;
            *rem.get_mut(&e.v()).unwrap() -= 1;
            chosen.push(e);
            if left(rem, e.u()) && left(rem, e.v()) && rec(i + 1, edges, rem, chosen) {
                return true;
            }
            chosen.pop();
            *rem.get_mut(&e.u()).unwrap() += 1;
            *rem.get_mut(&e.v()).unwrap() += 1;
        }
        left(rem, e.u()) && left(rem, e.v()) && rec(i + 1, edges, rem, chosen)
    }
    let mut chosen = Vec::new();
    rec(0, edges, rem, &mut chosen).then_some(chosen)
}

/// Maps a cycle cover with no cycle inside a kite to a perfect b-matching of
/// G′ of doubled weight `2 w(cover)`.
pub fn embed_kite_free_cover(cover: &CycleCover, sg: &SplitGraph, kites: &[Kite]) -> Result<BTreeSet<EdgeId>> {
    for c in &cover.cycles {
        if let Some(k) = kites.iter().find(|k| c.iter().all(|&v| k.contains(v))) {
            return Err(Error::NotKiteFree(format!("cycle {c:?} lies inside kite {:?}", k.vertices)));
        }
    }
    let mut sel = BTreeSet::new();
    let used: BTreeSet<EdgeId> = cover.edges().into_iter().collect();
    for &e in &used {
        match sg.split.get(&e) {
            Some(&(a, c)) => {
                sel.insert(EdgeId::new(e.u(), a));
                sel.insert(EdgeId::new(e.v(), c));
            }
            None => {
                sel.insert(e);
            }
        }
    }
    for (k, aux) in kites.iter().zip(&sg.gadgets) {
        let mut rem = BTreeMap::new();
        for e in k.problematic_edges() {
            let (a, c) = sg.split[&e];
            let r = usize::from(!used.contains(&e));
            rem.insert(a, r);
            rem.insert(c, r);
        }
        for &x in aux {
            rem.insert(x, sg.demand.get(x));
        }
        let local: Vec<EdgeId> =
            sg.fixed.iter().map(|&(e, _)| e).filter(|e| e.u() >= sg.n && rem.contains_key(&e.u()) && rem.contains_key(&e.v())).collect();
        let pick = exact_degree_subset(&local, &mut rem)
            .ok_or_else(|| Error::Internal(format!("no compliant gadget selection for kite {:?}", k.vertices)))?;
        sel.extend(pick);
    }
    Ok(sel)
}

/// Checks that `sel` is a perfect b-matching of G′ and returns its doubled weight.
pub fn b_matching_weight(sg: &SplitGraph, g: &CompleteGraph, sel: &BTreeSet<EdgeId>) -> Result<Weight> {
    let fixed: BTreeMap<EdgeId, Weight> = sg.fixed.iter().copied().collect();
    let mut deg = vec![0; sg.total];
    let mut total = 0;
    for &e in sel {
        let w = match fixed.get(&e) {
            Some(&w) => w,
            None if e.v() < sg.n => sg.pool_weight(g, e.u(), e.v()).ok_or_else(|| Error::Internal(format!("{e:?} is split")))?,
            None => return Err(Error::Internal(format!("{e:?} is not an edge of G'"))),
        };
        total += w;
        deg[e.u()] += 1;
        deg[e.v()] += 1;
    }
    if let Some(v) = (0..sg.total).find(|&v| deg[v] != sg.demand.get(v)) {
        return Err(Error::Internal(format!("vertex {v} has degree {} instead of {}", deg[v], sg.demand.get(v))));
    }
    Ok(total)
}
