//! Completion of the path-3-coloring over G′₁ = G₁ − F₁ + F₂.
//!
//! The colors of G₁ are replayed into G′₁; what is left is H: the kite edges,
//! the tails and the edges of F₂. Shrinking every kite of H to a node gives
//! the graph I, used here for ordering and reporting. H is colored by a
//! most-constrained search whose ties follow the processing order of I:
//! directed cycles first, then maximal directed paths.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::search::{accept_all, completion_steps, no_preference, Order, Outcome, Search};
use super::state::{mask_colors, Color, ColorState, K3};
use crate::cycle_cover::{Kite, KiteKind};
use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::graph::{CycleCover, EdgeId};
use crate::matching::Matching;

const COMPONENT_BUDGET: u64 = 200_000;
const GLOBAL_BUDGET: u64 = 2_000_000;

/// d(e) = 2·[e ∈ C_max] + [e ∈ M] − [e ∈ F₁] + [e ∈ F₂].
pub fn g1prime_requirements(cmax: &CycleCover, m: &Matching, f1: &BTreeSet<EdgeId>, f2: &BTreeSet<EdgeId>) -> Vec<(EdgeId, u8)> {
    let mut d: BTreeMap<EdgeId, i32> = BTreeMap::new();
    for e in cmax.edges() {
        *d.entry(e).or_default() += 2;
    }
    for &e in &m.pairs {
        *d.entry(e).or_default() += 1;
    }
    for &e in f1 {
        *d.entry(e).or_default() -= 1;
    }
    for &e in f2 {
        *d.entry(e).or_default() += 1;
    }
    d.into_iter().filter(|&(_, k)| k > 0).map(|(e, k)| (e, k as u8)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    /// A shrunk 3-kite.
    T,
    /// A shrunk 4-kite.
    S,
    /// An ordinary vertex.
    O,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphI {
    pub kinds: Vec<NodeKind>,
    /// Node of every vertex touched by H.
    pub node_of: BTreeMap<usize, usize>,
    /// Directed edges (tail node, head node, edge of H); undirected tails
    /// between twins appear once with `directed == false`.
    pub arcs: Vec<(usize, usize, EdgeId, bool)>,
    /// Colors still free at ordinary vertices.
    pub z: BTreeMap<usize, Vec<Color>>,
}

impl GraphI {
    pub fn out_degree(&self, node: usize) -> usize {
        self.arcs.iter().filter(|a| a.3 && a.0 == node).count()
    }

    /// Cycles first, then maximal paths grown from nodes without incoming
    /// arcs, longest first. Returns nodes in processing order.
    pub fn processing_order(&self) -> Vec<usize> {
        let k = self.kinds.len();
        let mut next: Vec<Option<usize>> = vec![None; k];
        let mut indeg = vec![0usize; k];
        for &(a, b, _, directed) in &self.arcs {
            if directed && next[a].is_none() {
                next[a] = Some(b);
                indeg[b] += 1;
            }
        }
        let mut order = Vec::new();
        let mut placed = vec![false; k];
        let mut mark = vec![0u8; k];
        for s in 0..k {
            let mut walk = Vec::new();
            let mut p = s;
            while mark[p] == 0 {
                mark[p] = 1;
                walk.push(p);
                match next[p] {
                    Some(q) => p = q,
                    None => break,
                }
            }
            if mark[p] == 1 && next[p].is_some() {
                if let Some(i) = walk.iter().position(|&x| x == p) {
                    for &x in &walk[i..] {
                        placed[x] = true;
                        order.push(x);
                    }
                }
            }
            for x in walk {
                mark[x] = 2;
            }
        }
        let path_from = |s: usize, placed: &[bool]| {
            let mut out = vec![s];
            let mut p = s;
            while let Some(q) = next[p] {
                if placed[q] || out.contains(&q) {
                    break;
                }
                out.push(q);
                p = q;
            }
            out
        };
        loop {
            let best = (0..k)
                .filter(|&s| !placed[s] && (indeg[s] == 0 || next.iter().enumerate().all(|(a, n)| placed[a] || *n != Some(s))))
                .map(|s| path_from(s, &placed))
                .max_by_key(|p| (p.len(), std::cmp::Reverse(p[0])));
            let Some(p) = best else { break };
            for x in p {
                placed[x] = true;
                order.push(x);
            }
        }
        order.extend((0..k).filter(|&x| !placed[x]));
        order
    }
}

pub fn build_graph_i(state: &ColorState, kites: &[Kite], orientation: &dyn Fn(EdgeId) -> Option<(usize, usize)>) -> GraphI {
    let mut kinds = Vec::new();
    let mut node_of = BTreeMap::new();
    for k in kites {
        let id = kinds.len();
        kinds.push(if k.kind == KiteKind::Three { NodeKind::T } else { NodeKind::S });
        for &v in &k.vertices {
            node_of.insert(v, id);
        }
    }
    let h: Vec<usize> = state.uncolored();
    for &i in &h {
        for v in state.edge(i).ends() {
            node_of.entry(v).or_insert_with(|| {
                kinds.push(NodeKind::O);
                kinds.len() - 1
            });
        }
    }
    let mut arcs = Vec::new();
    for &i in &h {
        let e = state.edge(i);
        let (a, b) = (node_of[&e.u()], node_of[&e.v()]);
        if a == b {
            continue;
        }
        match orientation(e) {
            Some((t, hd)) => arcs.push((node_of[&t], node_of[&hd], e, true)),
            None => {
                // A tail leaves its kite; between two kites it is undirected.
                let twins = kinds[a] != NodeKind::O && kinds[b] != NodeKind::O;
                let (t, hd) = if kinds[a] == NodeKind::O { (b, a) } else { (a, b) };
                arcs.push((t, hd, e, !twins));
            }
        }
    }
    let mut z = BTreeMap::new();
    for (&v, &node) in &node_of {
        if kinds[node] == NodeKind::O {
            let free: Vec<Color> = K3.iter().copied().filter(|&k| state.count(v, k) < 2).collect();
            z.insert(v, free);
        }
    }
    GraphI { kinds, node_of, arcs, z }
}

#[derive(Clone, Debug)]
pub struct HColoring {
    pub state: ColorState,
    pub h_edges: Vec<EdgeId>,
    pub graph_i: GraphI,
    pub nodes: u64,
    pub fallbacks: usize,
}

/// Replays `g1` into a fresh state for G′₁.
pub fn build_h(n: usize, g1: &ColorState, reqs: Vec<(EdgeId, u8)>) -> Result<ColorState> {
    let mut st = ColorState::new(n, &K3, reqs)?;
    for (e, m) in g1.assignment() {
        let i = st.index_of(e).ok_or_else(|| Error::Internal(format!("colored edge {e:?} missing from G'1")))?;
        if st.need(i) < m.count_ones() as u8 {
            return Err(Error::Internal(format!("edge {e:?} has more colors than G'1 allows")));
        }
        st.add_edge_colors(e, m)?;
    }
    Ok(st)
}

/// Colors every remaining edge of `st`.
pub fn color_h(mut st: ColorState, kites: &[Kite], orientation: &dyn Fn(EdgeId) -> Option<(usize, usize)>) -> Result<HColoring> {
    let graph_i = build_graph_i(&st, kites, orientation);
    let rank: BTreeMap<usize, usize> = graph_i.processing_order().into_iter().enumerate().map(|(r, x)| (x, r)).collect();
    let mut todo = st.uncolored();
    let h_edges: Vec<EdgeId> = todo.iter().map(|&i| st.edge(i)).collect();
    let key = |i: usize| {
        let e = st.edge(i);
        let r = e.ends().iter().map(|v| graph_i.node_of.get(v).map_or(usize::MAX, |x| rank[x])).min().unwrap();
        (r, e)
    };
    todo.sort_by_key(|&i| key(i));
    let mut dsu = Dsu::new(st.n());
    for &i in &todo {
        let e = st.edge(i);
        dsu.union(e.u(), e.v());
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in &todo {
        comps.entry(dsu.find(st.edge(i).u())).or_default().push(i);
    }
    let mut comps: Vec<Vec<usize>> = comps.into_values().collect();
    comps.sort_by_key(|c| key(c[0]));
    let search = |budget| Search { order: Order::MostConstrained, prefer: &no_preference, check: &accept_all, budget };
    let start = st.checkpoint();
    let mut nodes = 0;
    let mut fallbacks = 0;
    let mut ok = true;
    for c in &comps {
        let steps = completion_steps(&st, c.iter().copied());
        let (out, k) = search(COMPONENT_BUDGET).run(&mut st, &steps);
        nodes += k;
        if out != Outcome::Solved {
            ok = false;
            break;
        }
    }
    if !ok {
        st.rollback(start);
        fallbacks += 1;
        let steps = completion_steps(&st, todo.iter().copied());
        let (out, k) = search(GLOBAL_BUDGET).run(&mut st, &steps);
        nodes += k;
        if out != Outcome::Solved {
            return Err(Error::Internal("H coloring failed".into()));
        }
    }
    for k in K3 {
        if !crate::graph::is_vertex_disjoint_paths(&st.class(k), st.n()) {
            return Err(Error::Internal(format!("class {k} of G'1 is not a path set")));
        }
    }
    debug_assert!((0..st.len()).all(|i| mask_colors(st.colors(i)).count() as u8 == st.need(i)));
    Ok(HColoring { state: st, h_edges, graph_i, nodes, fallbacks })
}

/// Number of color slots a kite needs in G′₁.
pub fn kite_slots(reqs: &[(EdgeId, u8)], k: &Kite) -> usize {
    reqs.iter().filter(|(e, _)| k.contains(e.u()) && k.contains(e.v())).map(|&(_, d)| d as usize).sum()
}
