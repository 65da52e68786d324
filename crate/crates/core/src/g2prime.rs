//! The multigraph G′₂ = C′₂ + M and its partition into cycles and paths.
//!
//! C′₂ is the multiset (I(C₂) ∪ Z ∪ F₁) \ F₂. Each copy of an edge is kept
//! apart so that a doubled edge can sit on two different trails. At every
//! vertex the two C₂ elements stay consecutive when both survive; remaining
//! edge ends are paired as far as possible.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gadget::RelaxedCycleCover;
use crate::graph::EdgeId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Source {
    /// A surviving element of I(C₂) ∪ Z.
    Cover,
    Exchange,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCopy {
    pub edge: EdgeId,
    pub source: Source,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trail {
    /// For a path `vertices.len() == copies.len() + 1`; for a cycle they are
    /// equal and the last copy returns to `vertices[0]`.
    pub vertices: Vec<usize>,
    pub copies: Vec<usize>,
    pub closed: bool,
}

impl Trail {
    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn is_simple(&self) -> bool {
        let set: BTreeSet<usize> = self.vertices.iter().copied().collect();
        set.len() == self.vertices.len()
    }
}

pub struct G2Input<'a> {
    pub n: usize,
    pub c2: &'a RelaxedCycleCover,
    pub z: &'a BTreeSet<EdgeId>,
    pub f1: &'a BTreeSet<EdgeId>,
    pub f2: &'a BTreeSet<EdgeId>,
    pub mates: &'a [usize],
}

#[derive(Clone, Debug, Serialize)]
pub struct G2Prime {
    pub n: usize,
    pub copies: Vec<EdgeCopy>,
    /// Multiplicity of each edge in G′₂, matching included.
    pub mult: BTreeMap<EdgeId, u8>,
    pub trails: Vec<Trail>,
    pub degree: Vec<usize>,
    #[serde(skip)]
    pub mates: Vec<usize>,
}

/// The copies of C′₂, cover copies first.
pub fn c2prime_copies(inp: &G2Input) -> Result<Vec<EdgeCopy>> {
    let half = inp.c2.half_edge_ids();
    for e in inp.f2 {
        if !inp.c2.whole_edges.contains(e) && !inp.z.contains(e) {
            return Err(Error::Internal(format!("F2 edge {e:?} not in I or Z")));
        }
        if inp.f1.contains(e) {
            return Err(Error::Internal(format!("edge {e:?} in both F1 and F2")));
        }
    }
    for e in inp.z {
        if !half.contains(e) {
            return Err(Error::Internal(format!("Z edge {e:?} is not a half-edge")));
        }
    }
    let mut out: Vec<EdgeCopy> = inp
        .c2
        .whole_edges
        .iter()
        .chain(inp.z.iter())
        .filter(|e| !inp.f2.contains(e))
        .map(|&edge| EdgeCopy { edge, source: Source::Cover })
        .collect();
    out.extend(inp.f1.iter().map(|&edge| EdgeCopy { edge, source: Source::Exchange }));
    Ok(out)
}

/// Edge-end pairing at every vertex; `choice[i]` picks among the three ways
/// to pair at the `i`-th ambiguous vertex.
struct Pairing {
    partner: BTreeMap<(usize, usize), (usize, usize)>,
    ambiguous: usize,
}

fn end_vertex(c: &EdgeCopy, side: usize) -> usize {
    if side == 0 {
        c.edge.u()
    } else {
        c.edge.v()
    }
}

fn pair_ends(inp: &G2Input, copies: &[EdgeCopy], choice: &[usize]) -> Pairing {
    let mut ends: Vec<Vec<(usize, usize)>> = vec![Vec::new(); inp.n];
    for (i, c) in copies.iter().enumerate() {
        ends[c.edge.u()].push((i, 0));
        ends[c.edge.v()].push((i, 1));
    }
    let halves: BTreeSet<(EdgeId, usize)> = inp.c2.half_edges.iter().map(|h| (h.edge, h.endpoint)).collect();
    let mut partner = BTreeMap::new();
    let mut ambiguous = 0;
    for (v, list) in ends.iter().enumerate() {
        let element = |&(i, _): &(usize, usize)| {
            let c = &copies[i];
            c.source == Source::Cover && (inp.c2.whole_edges.contains(&c.edge) || halves.contains(&(c.edge, v)))
        };
        let (elems, rest): (Vec<(usize, usize)>, Vec<(usize, usize)>) = list.iter().partition(|x| element(x));
        let mut link = |a: (usize, usize), b: (usize, usize)| {
            partner.insert(a, b);
            partner.insert(b, a);
        };
        if elems.len() == 2 {
            link(elems[0], elems[1]);
            continue;
        }
        let free: Vec<(usize, usize)> = elems.into_iter().chain(rest).collect();
        match free.len() {
            0 | 1 => {}
            2 => link(free[0], free[1]),
            3 => {
                let c = choice.get(ambiguous).copied().unwrap_or(0) % 3;
                ambiguous += 1;
                let (a, b) = [(0, 1), (0, 2), (1, 2)][c];
                link(free[a], free[b]);
            }
            _ => {
                for p in free.chunks(2).filter(|p| p.len() == 2) {
                    link(p[0], p[1]);
                }
            }
        }
    }
    Pairing { partner, ambiguous }
}

fn walk(copies: &[EdgeCopy], partner: &BTreeMap<(usize, usize), (usize, usize)>, start: (usize, usize), used: &mut [bool]) -> Trail {
    let mut vertices = vec![end_vertex(&copies[start.0], start.1)];
    let mut ids = Vec::new();
    let (mut i, mut side) = start;
    loop {
        used[i] = true;
        ids.push(i);
        let far = (i, 1 - side);
        match partner.get(&far) {
            Some(&(j, s)) if !used[j] => {
                vertices.push(end_vertex(&copies[i], 1 - side));
                i = j;
                side = s;
            }
            Some(_) => {
                return Trail { vertices, copies: ids, closed: true };
            }
            None => {
                vertices.push(end_vertex(&copies[i], 1 - side));
                return Trail { vertices, copies: ids, closed: false };
            }
        }
    }
}

fn trails_for(copies: &[EdgeCopy], pairing: &Pairing, degree: &[usize]) -> Vec<Trail> {
    let mut used = vec![false; copies.len()];
    let mut out = Vec::new();
    for i in 0..copies.len() {
        for side in 0..2 {
            if !used[i] && !pairing.partner.contains_key(&(i, side)) {
                let t = walk(copies, &pairing.partner, (i, side), &mut used);
                out.push(orient_path(t, degree));
            }
        }
    }
    for i in 0..copies.len() {
        if !used[i] {
            out.push(walk(copies, &pairing.partner, (i, 0), &mut used));
        }
    }
    out
}

/// Points a path at its degree-4 end, else away from its smaller end.
fn orient_path(mut t: Trail, degree: &[usize]) -> Trail {
    let (a, b) = (t.vertices[0], *t.vertices.last().unwrap());
    let flip = if degree[b] == 4 {
        false
    } else if degree[a] == 4 {
        true
    } else {
        a > b
    };
    if flip {
        t.vertices.reverse();
        t.copies.reverse();
    }
    t
}

impl G2Prime {
    pub fn is_double(&self, e: EdgeId) -> bool {
        self.mult.get(&e).copied().unwrap_or(0) >= 2
    }

    pub fn mate_edge(&self, v: usize) -> Option<EdgeId> {
        EdgeId::try_new(v, *self.mates.get(v)?)
    }

    pub fn trail_edges(&self, t: &Trail) -> Vec<EdgeId> {
        t.copies.iter().map(|&c| self.copies[c].edge).collect()
    }

    /// The last edge of a path ending at a degree-4 vertex.
    pub fn border(&self, t: &Trail) -> Option<usize> {
        (!t.closed && self.degree[*t.vertices.last().unwrap()] == 4).then(|| *t.copies.last().unwrap())
    }

    /// Trail through `v` as an inner vertex, if any.
    pub fn trail_through(&self, v: usize) -> Option<usize> {
        self.trails.iter().position(|t| {
            let inner = if t.closed { &t.vertices[..] } else { &t.vertices[1..t.vertices.len() - 1] };
            inner.contains(&v)
        })
    }

    /// Arcs of G_p: path `p` to the path its border leads into.
    pub fn path_graph(&self) -> Vec<Option<usize>> {
        self.trails
            .iter()
            .map(|t| {
                self.border(t)?;
                let q = self.trail_through(*t.vertices.last().unwrap())?;
                (!self.trails[q].closed).then_some(q)
            })
            .collect()
    }

    /// Structural violations among trails whose vertices all satisfy `scope`.
    pub fn violations(&self, scope: &dyn Fn(usize) -> bool) -> Vec<String> {
        let mut out = Vec::new();
        for v in (0..self.n).filter(|&v| scope(v)) {
            if self.degree[v] > 4 {
                out.push(format!("degree: vertex {v} has degree {}", self.degree[v]));
            }
        }
        for t in &self.trails {
            if !t.vertices.iter().all(|&v| scope(v)) {
                continue;
            }
            if t.closed {
                if let Some(w) = self.odd_cycle_witness(t) {
                    out.push(format!("property 6: odd cycle {:?} with double edges {w:?}", t.vertices));
                }
            } else if let Some(w) = self.amenable_failure(t) {
                out.push(format!("property 7: path {:?} {w}", t.vertices));
            }
        }
        out
    }

    /// For an odd cycle whose every vertex meets a double edge off the cycle,
    /// the list of those double edges.
    pub fn odd_cycle_witness(&self, t: &Trail) -> Option<Vec<EdgeId>> {
        if t.len().is_multiple_of(2) {
            return None;
        }
        let on: BTreeSet<EdgeId> = self.trail_edges(t).into_iter().collect();
        let mut found = Vec::new();
        for &u in &t.vertices {
            let d = self.mult.iter().find(|(e, &m)| m >= 2 && e.contains(u) && !on.contains(e))?;
            found.push(*d.0);
        }
        Some(found)
    }

    /// Why a path is not amenable, if it is not.
    pub fn amenable_failure(&self, t: &Trail) -> Option<String> {
        let xs = &t.vertices;
        let k = t.len();
        let (w, v) = (xs[0], xs[k]);
        if self.degree[v] < 4 {
            return None;
        }
        if self.degree[w] >= 4 {
            return Some("has degree-4 vertices at both ends".into());
        }
        let es = self.trail_edges(t);
        let last_double = self.is_double(es[k - 1]);
        let second_double = k >= 2 && self.is_double(es[k - 2]);
        let matched = k >= 3 && self.mates[xs[k - 1]] == xs[k - 3];
        (!(last_double || second_double || matched)).then(|| "ends at a degree-4 vertex without a double or matched end".into())
    }
}

/// Builds G′₂, choosing the end pairing at ambiguous vertices so that the
/// trails inside `scope` violate as little as possible.
pub fn build_g2prime(inp: &G2Input, scope: &dyn Fn(usize) -> bool) -> Result<G2Prime> {
    let copies = c2prime_copies(inp)?;
    let mut mult: BTreeMap<EdgeId, u8> = BTreeMap::new();
    let mut degree = vec![0usize; inp.n];
    for c in &copies {
        *mult.entry(c.edge).or_default() += 1;
        degree[c.edge.u()] += 1;
        degree[c.edge.v()] += 1;
    }
    for v in 0..inp.n {
        if let Some(e) = EdgeId::try_new(v, inp.mates[v]) {
            if e.u() == v {
                *mult.entry(e).or_default() += 1;
            }
            degree[v] += 1;
        }
    }
    let first = pair_ends(inp, &copies, &[]);
    let amb = first.ambiguous.min(8);
    let mut best: Option<(usize, G2Prime)> = None;
    let mut choice = vec![0usize; amb];
    loop {
        let pairing = pair_ends(inp, &copies, &choice);
        let trails = trails_for(&copies, &pairing, &degree);
        let g = G2Prime { n: inp.n, copies: copies.clone(), mult: mult.clone(), trails, degree: degree.clone(), mates: inp.mates.to_vec() };
        let bad = g.violations(scope).len();
        if best.as_ref().is_none_or(|(b, _)| bad < *b) {
            best = Some((bad, g));
        }
        if bad == 0 {
            break;
        }
        // Next pairing choice, odometer style.
        let mut i = 0;
        while i < amb && choice[i] == 2 {
            choice[i] = 0;
            i += 1;
        }
        if i == amb {
            break;
        }
        choice[i] += 1;
    }
    Ok(best.unwrap().1)
}
