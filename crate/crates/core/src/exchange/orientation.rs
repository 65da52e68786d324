//! Orientation of I(C₂) in which every kite is balanced.
//!
//! Paths of I(C₂) end at kite vertices. Path ends at the same kite are paired
//! and the paths are chained through these pairs into virtual cycles, each
//! oriented consistently. A virtual cycle enters a kite exactly as often as
//! it leaves it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cycle_cover::Kite;
use crate::gadget::RelaxedCycleCover;
use crate::graph::EdgeId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orientation {
    arcs: BTreeMap<EdgeId, (usize, usize)>,
    /// Virtual cycle of each edge.
    component: BTreeMap<EdgeId, usize>,
    pub components: usize,
    /// Whether this is opp(D₂).
    pub opposite: bool,
}

impl Orientation {
    /// An orientation given by its arcs alone, as one virtual cycle.
    pub fn from_arcs(arcs: impl IntoIterator<Item = (EdgeId, (usize, usize))>) -> Self {
        let arcs: BTreeMap<EdgeId, (usize, usize)> = arcs.into_iter().collect();
        let component = arcs.keys().map(|&e| (e, 0)).collect();
        Orientation { arcs, component, components: 1, opposite: false }
    }

    pub fn arc(&self, e: EdgeId) -> Option<(usize, usize)> {
        self.arcs.get(&e).copied()
    }

    pub fn tail(&self, e: EdgeId) -> Option<usize> {
        self.arc(e).map(|a| a.0)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (EdgeId, (usize, usize))> + '_ {
        self.arcs.iter().map(|(&e, &a)| (e, a))
    }

    pub fn component(&self, e: EdgeId) -> Option<usize> {
        self.component.get(&e).copied()
    }

    pub fn reversed(&self) -> Self {
        let mut o = self.clone();
        for a in o.arcs.values_mut() {
            *a = (a.1, a.0);
        }
        o.opposite = !o.opposite;
        o
    }

    /// Reverses one virtual cycle only.
    pub fn flip_component(&self, c: usize) -> Self {
        let mut o = self.clone();
        for (e, a) in o.arcs.iter_mut() {
            if self.component[e] == c {
                *a = (a.1, a.0);
            }
        }
        o
    }

    /// External edges of I(C₂) entering and leaving `k`.
    pub fn kite_arcs(&self, k: &Kite) -> (Vec<EdgeId>, Vec<EdgeId>) {
        let mut inc = Vec::new();
        let mut out = Vec::new();
        for (&e, &(t, h)) in &self.arcs {
            match (k.contains(t), k.contains(h)) {
                (true, false) => out.push(e),
                (false, true) => inc.push(e),
                _ => {}
            }
        }
        (inc, out)
    }

    pub fn is_balanced(&self, k: &Kite) -> bool {
        let (i, o) = self.kite_arcs(k);
        i.len() == o.len()
    }
}

/// Orients I(C₂) as D₂.
pub fn build_orientations(c2: &RelaxedCycleCover, kites: &[Kite], n: usize) -> Orientation {
    let mut adj: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for &e in &c2.whole_edges {
        adj[e.u()].push(e);
        adj[e.v()].push(e);
    }
    // Components of I(C₂) as vertex sequences.
    let mut seen = vec![false; n];
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let trace = |start: usize, seen: &mut Vec<bool>| -> Vec<usize> {
        let mut seq = vec![start];
        seen[start] = true;
        let mut cur = start;
        let mut prev = usize::MAX;
        loop {
            let next = adj[cur].iter().map(|e| e.other(cur)).filter(|&x| x != prev && !seen[x]).min();
            match next {
                Some(x) => {
                    seen[x] = true;
                    seq.push(x);
                    prev = cur;
                    cur = x;
                }
                None => return seq,
            }
        }
    };
    for v in 0..n {
        if !seen[v] && adj[v].len() == 1 {
            paths.push(trace(v, &mut seen));
        }
    }
    for v in 0..n {
        if !seen[v] && adj[v].len() == 2 {
            cycles.push(trace(v, &mut seen));
        }
    }
    let kite_of: BTreeMap<usize, usize> = kites.iter().enumerate().flat_map(|(i, k)| k.vertices.iter().map(move |&v| (v, i))).collect();
    // Path ends grouped by kite; an end is (path, 0 = first vertex, 1 = last).
    let mut at_kite: BTreeMap<usize, Vec<(usize, usize, usize)>> = BTreeMap::new();
    for (p, seq) in paths.iter().enumerate() {
        for (side, &v) in [(0, &seq[0]), (1, seq.last().unwrap())] {
            if let Some(&k) = kite_of.get(&v) {
                at_kite.entry(k).or_default().push((v, p, side));
            }
        }
    }
    let mut link: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for ends in at_kite.values_mut() {
        ends.sort();
        for pair in ends.chunks(2).filter(|c| c.len() == 2) {
            link.insert((pair[0].1, pair[0].2), (pair[1].1, pair[1].2));
            link.insert((pair[1].1, pair[1].2), (pair[0].1, pair[0].2));
        }
    }
    let mut arcs = BTreeMap::new();
    let mut component = BTreeMap::new();
    let mut comp = 0;
    let mut done = vec![false; paths.len()];
    let mut orient = |seq: &[usize], forward: bool, comp: usize, closed: bool| {
        let mut vs: Vec<usize> = seq.to_vec();
        if !forward {
            vs.reverse();
        }
        if closed {
            vs.push(vs[0]);
        }
        for w in vs.windows(2) {
            let e = EdgeId::new(w[0], w[1]);
            arcs.insert(e, (w[0], w[1]));
            component.insert(e, comp);
        }
    };
    // Chains that start at an unpaired end first, then the closed ones.
    let mut starts: Vec<(usize, usize)> = Vec::new();
    for p in 0..paths.len() {
        for side in 0..2 {
            if !link.contains_key(&(p, side)) {
                starts.push((p, side));
            }
        }
    }
    starts.extend((0..paths.len()).map(|p| (p, 0)));
    for (p0, side0) in starts {
        if done[p0] {
            continue;
        }
        let (mut p, mut entry) = (p0, side0);
        while !done[p] {
            done[p] = true;
            orient(&paths[p], entry == 0, comp, false);
            match link.get(&(p, 1 - entry)) {
                Some(&(q, s)) => {
                    p = q;
                    entry = s;
                }
                None => break,
            }
        }
        comp += 1;
    }
    for c in &cycles {
        orient(c, true, comp, true);
        comp += 1;
    }
    Orientation { arcs, component, components: comp, opposite: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle_cover::KiteKind;
    use crate::graph::HalfEdge;

    #[test]
    fn plain_cycle_and_reverse() {
        let c2 = RelaxedCycleCover {
            whole_edges: [(0, 1), (1, 2), (2, 3), (0, 3)].iter().map(|&(a, b)| EdgeId::new(a, b)).collect(),
            half_edges: Default::default(),
            weight: 0,
        };
        let d = build_orientations(&c2, &[], 4);
        let mut out = [0; 4];
        for (_, (t, _)) in d.arcs() {
            out[t] += 1;
        }
        assert_eq!(out, [1; 4]);
        let r = d.reversed();
        assert!(r.opposite);
        for (e, (t, h)) in d.arcs() {
            assert_eq!(r.arc(e), Some((h, t)));
        }
    }

    #[test]
    fn paths_through_a_kite_are_balanced() {
        // 3-kite {0,1,2} with both halves of (1,2), path 1-3-4-5-2 and
        // cycle 0-6-7 through the foot.
        let whole = [(1, 3), (3, 4), (4, 5), (2, 5), (0, 6), (6, 7), (0, 7)];
        let c2 = RelaxedCycleCover {
            whole_edges: whole.iter().map(|&(a, b)| EdgeId::new(a, b)).collect(),
            half_edges: [HalfEdge::new(EdgeId::new(1, 2), 1), HalfEdge::new(EdgeId::new(1, 2), 2)].into(),
            weight: 0,
        };
        let k = Kite { kind: KiteKind::Three, cycle: 0, vertices: vec![0, 1, 2], d_edges: vec![EdgeId::new(1, 2)], foot: Some(0) };
        let d = build_orientations(&c2, std::slice::from_ref(&k), 8);
        assert!(d.is_balanced(&k));
        assert!(d.reversed().is_balanced(&k));
        let (i, o) = d.kite_arcs(&k);
        assert_eq!((i.len(), o.len()), (2, 2));
        for c in 0..d.components {
            assert!(d.flip_component(c).is_balanced(&k));
        }
    }
}
