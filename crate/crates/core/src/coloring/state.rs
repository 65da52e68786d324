//! Incremental path-coloring state.
//!
//! Every edge carries a requirement (how many distinct colors it needs) and
//! the set of colors assigned so far. A color may be added to an edge only if
//! both endpoints have fewer than two edges of that color and the endpoints
//! are not already joined by that color, so every class stays a set of
//! vertex-disjoint paths at all times. Additions are undone in LIFO order.

use std::collections::HashMap;

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::graph::EdgeId;

/// Colors are small integers; bit `k` of a mask stands for color `k`.
pub type Color = u8;
pub type ColorMask = u8;

pub const K3: [Color; 3] = [1, 2, 3];
pub const K2: [Color; 2] = [4, 5];
const SLOTS: usize = 6;

pub fn bit(k: Color) -> ColorMask {
    1 << k
}

pub fn mask_colors(m: ColorMask) -> impl Iterator<Item = Color> {
    (0..8u8).filter(move |k| m & (1 << k) != 0)
}

#[derive(Clone, Debug)]
pub struct ColorState {
    n: usize,
    palette: Vec<Color>,
    edges: Vec<EdgeId>,
    index: HashMap<EdgeId, usize>,
    need: Vec<u8>,
    mask: Vec<ColorMask>,
    incident: Vec<Vec<usize>>,
    count: Vec<[u8; SLOTS]>,
    dsu: Vec<Dsu>,
    trail: Vec<(usize, Color)>,
}

impl ColorState {
    /// `reqs` lists each edge once with its requirement.
    pub fn new(n: usize, palette: &[Color], reqs: impl IntoIterator<Item = (EdgeId, u8)>) -> Result<Self> {
        let mut s = ColorState {
            n,
            palette: palette.to_vec(),
            edges: Vec::new(),
            index: HashMap::new(),
            need: Vec::new(),
            mask: Vec::new(),
            incident: vec![Vec::new(); n],
            count: vec![[0; SLOTS]; n],
            dsu: (0..SLOTS).map(|_| Dsu::new(n)).collect(),
            trail: Vec::new(),
        };
        for (e, d) in reqs {
            if e.v() >= n {
                return Err(Error::Internal(format!("edge {e:?} outside vertex range")));
            }
            if d as usize > palette.len() {
                return Err(Error::Internal(format!("edge {e:?} needs {d} colors")));
            }
            if s.index.insert(e, s.edges.len()).is_some() {
                return Err(Error::Internal(format!("edge {e:?} listed twice")));
            }
            s.incident[e.u()].push(s.edges.len());
            s.incident[e.v()].push(s.edges.len());
            s.edges.push(e);
            s.need.push(d);
            s.mask.push(0);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn palette(&self) -> &[Color] {
        &self.palette
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge(&self, i: usize) -> EdgeId {
        self.edges[i]
    }

    pub fn index_of(&self, e: EdgeId) -> Option<usize> {
        self.index.get(&e).copied()
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn need(&self, i: usize) -> u8 {
        self.need[i]
    }

    pub fn colors(&self, i: usize) -> ColorMask {
        self.mask[i]
    }

    /// Colors of `e`, empty if `e` is not in the graph.
    pub fn colors_of(&self, e: EdgeId) -> ColorMask {
        self.index_of(e).map_or(0, |i| self.mask[i])
    }

    /// The single color of a fully colored one-color edge.
    pub fn single_color(&self, e: EdgeId) -> Option<Color> {
        let m = self.colors_of(e);
        (m.count_ones() == 1).then(|| m.trailing_zeros() as Color)
    }

    pub fn remaining(&self, i: usize) -> u8 {
        self.need[i] - self.mask[i].count_ones() as u8
    }

    pub fn count(&self, v: usize, k: Color) -> u8 {
        self.count[v][k as usize]
    }

    pub fn joined(&self, a: usize, b: usize, k: Color) -> bool {
        self.dsu[k as usize].same(a, b)
    }

    pub fn can_add(&self, i: usize, k: Color) -> bool {
        let e = self.edges[i];
        self.remaining(i) > 0
            && self.palette.contains(&k)
            && self.mask[i] & bit(k) == 0
            && self.count[e.u()][k as usize] < 2
            && self.count[e.v()][k as usize] < 2
            && !self.dsu[k as usize].same(e.u(), e.v())
    }

    /// Colors that could be added to edge `i` right now.
    pub fn free(&self, i: usize) -> ColorMask {
        self.palette.iter().filter(|&&k| self.can_add(i, k)).fold(0, |m, &k| m | bit(k))
    }

    pub fn add(&mut self, i: usize, k: Color) -> Result<()> {
        if !self.can_add(i, k) {
            return Err(Error::Internal(format!("color {k} cannot go on {:?}", self.edges[i])));
        }
        let e = self.edges[i];
        self.mask[i] |= bit(k);
        self.count[e.u()][k as usize] += 1;
        self.count[e.v()][k as usize] += 1;
        self.dsu[k as usize].union(e.u(), e.v());
        self.trail.push((i, k));
        Ok(())
    }

    /// Adds every color of `m`; on failure nothing is added.
    pub fn try_add_mask(&mut self, i: usize, m: ColorMask) -> bool {
        let cp = self.checkpoint();
        for k in mask_colors(m) {
            if self.add(i, k).is_err() {
                self.rollback(cp);
                return false;
            }
        }
        true
    }

    pub fn add_edge_colors(&mut self, e: EdgeId, m: ColorMask) -> Result<()> {
        let i = self.index_of(e).ok_or_else(|| Error::Internal(format!("edge {e:?} not in graph")))?;
        if self.try_add_mask(i, m) {
            Ok(())
        } else {
            Err(Error::Internal(format!("colors {m:#b} cannot go on {e:?}")))
        }
    }

    pub fn checkpoint(&self) -> usize {
        self.trail.len()
    }

    pub fn rollback(&mut self, to: usize) {
        while self.trail.len() > to {
            let (i, k) = self.trail.pop().unwrap();
            let e = self.edges[i];
            self.mask[i] &= !bit(k);
            self.count[e.u()][k as usize] -= 1;
            self.count[e.v()][k as usize] -= 1;
            let d = &mut self.dsu[k as usize];
            d.rollback(d.checkpoint() - 1);
        }
    }

    pub fn is_complete(&self) -> bool {
        (0..self.len()).all(|i| self.remaining(i) == 0)
    }

    pub fn uncolored(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.remaining(i) > 0).collect()
    }

    /// Edges carrying color `k`, sorted.
    pub fn class(&self, k: Color) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = (0..self.len()).filter(|&i| self.mask[i] & bit(k) != 0).map(|i| self.edges[i]).collect();
        out.sort();
        out
    }

    /// Sorted (edge, colors) pairs for every edge with at least one color.
    pub fn assignment(&self) -> Vec<(EdgeId, ColorMask)> {
        let mut out: Vec<(EdgeId, ColorMask)> =
            (0..self.len()).filter(|&i| self.mask[i] != 0).map(|i| (self.edges[i], self.mask[i])).collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_vertex_disjoint_paths;

    #[test]
    fn triangle_cannot_close() {
        let es = [EdgeId::new(0, 1), EdgeId::new(1, 2), EdgeId::new(0, 2)];
        let mut s = ColorState::new(3, &K3, es.iter().map(|&e| (e, 2))).unwrap();
        s.add(0, 1).unwrap();
        s.add(1, 1).unwrap();
        assert!(!s.can_add(2, 1));
        assert_eq!(s.free(2), bit(2) | bit(3));
        let cp = s.checkpoint();
        s.add(2, 2).unwrap();
        assert!(!s.can_add(2, 2));
        s.rollback(cp);
        assert_eq!(s.colors(2), 0);
        assert!(s.can_add(2, 2));
    }

    #[test]
    fn degree_limit_and_classes() {
        let es = [EdgeId::new(0, 1), EdgeId::new(0, 2), EdgeId::new(0, 3)];
        let mut s = ColorState::new(4, &K2, es.iter().map(|&e| (e, 1))).unwrap();
        s.add(0, 4).unwrap();
        s.add(1, 4).unwrap();
        assert!(!s.can_add(2, 4));
        assert!(!s.can_add(2, 1));
        s.add(2, 5).unwrap();
        assert!(s.is_complete());
        for k in K2 {
            assert!(is_vertex_disjoint_paths(&s.class(k), 4));
        }
        assert!(!s.try_add_mask(0, bit(5)));
        assert_eq!(s.colors(0), bit(4));
    }

    #[test]
    fn rejects_bad_requirements() {
        assert!(ColorState::new(3, &K2, [(EdgeId::new(0, 1), 3)]).is_err());
        assert!(ColorState::new(3, &K3, [(EdgeId::new(0, 1), 1), (EdgeId::new(0, 1), 1)]).is_err());
        assert!(ColorState::new(2, &K3, [(EdgeId::new(0, 2), 1)]).is_err());
    }
}
