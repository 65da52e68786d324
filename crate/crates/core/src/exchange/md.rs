//! Matching of odd C₂ cycles to d-edges.
//!
//! A cycle of I(C₂) of odd length l with l incident d-edges would turn into
//! an odd cycle surrounded by double edges once those d-edges are doubled.
//! Each such cycle gets its own d-edge (or a whole 4-kite) whose kite then
//! prefers to cut the cycle.

use std::collections::{BTreeMap, BTreeSet};

use crate::cycle_cover::{Kite, KiteKind};
use crate::error::{Error, Result};
use crate::gadget::RelaxedCycleCover;
use crate::graph::EdgeId;

/// Cycles of I(C₂) as vertex sequences.
pub fn cover_cycles(c2: &RelaxedCycleCover, n: usize) -> Vec<Vec<usize>> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in &c2.whole_edges {
        adj[e.u()].push(e.v());
        adj[e.v()].push(e.u());
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] || adj[s].len() != 2 {
            continue;
        }
        let mut seq = vec![s];
        seen[s] = true;
        let (mut prev, mut cur) = (s, adj[s][0]);
        let mut closed = false;
        loop {
            if cur == s {
                closed = true;
                break;
            }
            if seen[cur] || adj[cur].len() != 2 {
                break;
            }
            seen[cur] = true;
            seq.push(cur);
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = next;
        }
        if closed {
            out.push(seq);
        }
    }
    out
}

/// Nodes that cycles can be matched to: single d-edges, or both d-edges of
/// a 4-kite merged into one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdMatching {
    /// Odd cycles needing a partner.
    pub cycles: Vec<Vec<usize>>,
    pub nodes: Vec<Vec<EdgeId>>,
    /// `assigned[i]` is the node of `cycles[i]`.
    pub assigned: Vec<usize>,
}

impl MdMatching {
    /// The cycle matched to a node containing `d`.
    pub fn cycle_for(&self, d: EdgeId) -> Option<&[usize]> {
        let node = self.nodes.iter().position(|x| x.contains(&d))?;
        let i = self.assigned.iter().position(|&a| a == node)?;
        Some(&self.cycles[i])
    }
}

pub fn build_md_matching(c2: &RelaxedCycleCover, kites: &[Kite], n: usize) -> Result<MdMatching> {
    let d_of: BTreeMap<usize, (EdgeId, usize)> =
        kites.iter().enumerate().flat_map(|(ki, k)| k.d_edges.iter().flat_map(move |&d| d.ends().map(|v| (v, (d, ki))))).collect();
    let mut cycles = Vec::new();
    let mut incident: Vec<BTreeSet<EdgeId>> = Vec::new();
    for c in cover_cycles(c2, n) {
        if c.len() % 2 == 0 {
            continue;
        }
        let on: BTreeSet<EdgeId> = crate::graph::cycle_edges(&c).collect();
        let ds: BTreeSet<EdgeId> = c.iter().filter_map(|v| d_of.get(v)).map(|&(d, _)| d).filter(|d| !on.contains(d)).collect();
        if ds.len() >= c.len() && c.iter().all(|v| d_of.contains_key(v)) {
            cycles.push(c);
            incident.push(ds);
        }
    }
    let mut nodes: Vec<Vec<EdgeId>> = Vec::new();
    for k in kites {
        let hits = incident.iter().filter(|ds| k.d_edges.iter().any(|d| ds.contains(d))).count();
        if k.kind == KiteKind::Four && hits <= 3 {
            nodes.push(k.d_edges.clone());
        } else {
            nodes.extend(k.d_edges.iter().map(|&d| vec![d]));
        }
    }
    let adj: Vec<Vec<usize>> =
        incident.iter().map(|ds| (0..nodes.len()).filter(|&j| nodes[j].iter().any(|d| ds.contains(d))).collect()).collect();
    let mut owner: Vec<Option<usize>> = vec![None; nodes.len()];
    fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|o| augment(o, adj, owner, seen)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    for i in 0..cycles.len() {
        let mut seen = vec![false; nodes.len()];
        if !augment(i, &adj, &mut owner, &mut seen) {
            return Err(Error::Internal(format!("odd cycle {:?} cannot be matched to a d-edge", cycles[i])));
        }
    }
    let mut assigned = vec![0; cycles.len()];
    for (j, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            assigned[*i] = j;
        }
    }
    Ok(MdMatching { cycles, nodes, assigned })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kite3(foot: usize, a: usize, b: usize) -> Kite {
        Kite { kind: KiteKind::Three, cycle: 0, vertices: vec![foot, a, b], d_edges: vec![EdgeId::new(a, b)], foot: Some(foot) }
    }

    #[test]
    fn empty_without_odd_cycles() {
        let c2 = RelaxedCycleCover { whole_edges: BTreeSet::new(), half_edges: BTreeSet::new(), weight: 0 };
        let md = build_md_matching(&c2, &[], 4).unwrap();
        assert!(md.cycles.is_empty());
    }

    #[test]
    fn triangle_of_d_edge_ends() {
        // Triangle 1-3-5 whose vertices carry the d-edges of three 3-kites.
        let ks = [kite3(0, 1, 2), kite3(6, 3, 4), kite3(7, 5, 8)];
        let c2 = RelaxedCycleCover {
            whole_edges: [(1, 3), (3, 5), (1, 5)].iter().map(|&(a, b)| EdgeId::new(a, b)).collect(),
            half_edges: BTreeSet::new(),
            weight: 0,
        };
        let md = build_md_matching(&c2, &ks, 9).unwrap();
        assert_eq!(md.cycles, vec![vec![1, 3, 5]]);
        let d = &md.nodes[md.assigned[0]];
        assert!(ks.iter().any(|k| &k.d_edges == d));
        assert_eq!(md.cycle_for(d[0]), Some(&[1, 3, 5][..]));
    }

    #[test]
    fn two_cycles_share_one_kite() {
        // Both triangles touch d-edge (1,2); each has two private d-edges.
        let ks = [kite3(0, 1, 2), kite3(20, 3, 4), kite3(21, 5, 6), kite3(22, 7, 8), kite3(23, 9, 10)];
        let c2 = RelaxedCycleCover {
            whole_edges: [(1, 3), (3, 5), (1, 5), (2, 7), (7, 9), (2, 9)].iter().map(|&(a, b)| EdgeId::new(a, b)).collect(),
            half_edges: BTreeSet::new(),
            weight: 0,
        };
        let md = build_md_matching(&c2, &ks, 24).unwrap();
        assert_eq!(md.cycles.len(), 2);
        assert_ne!(md.assigned[0], md.assigned[1]);
        for (i, c) in md.cycles.iter().enumerate() {
            let node = &md.nodes[md.assigned[i]];
            assert!(node.iter().any(|d| c.iter().any(|&v| d.contains(v))));
        }
    }
}
