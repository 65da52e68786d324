//! Perfect b-matching by reduction to perfect matching.
//!
//! Each vertex `v` becomes `b(v)` copies. An edge whose endpoints both have
//! demand at least 2 becomes a two-node gadget `a_e - b_e`: `a_e` is joined to
//! every copy of `u` and `b_e` to every copy of `v` with weight `w`, and the
//! internal edge has weight 0. Either the gadget matches internally (edge
//! unused) or both sides match out (edge used, contributing `2w`). An edge
//! with a demand-1 endpoint cannot be used twice anyway, so it is expanded to
//! direct copy-to-copy edges of weight `2w`. The expanded optimum is exactly
//! twice the b-matching optimum.

use std::collections::BTreeSet;

use super::{max_weight_matching, GeneralGraph, MatchingSolution};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Weight};

/// Required degree of every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeDemand {
    b: Vec<usize>,
}

impl DegreeDemand {
    pub fn new(b: Vec<usize>) -> Result<Self> {
        if b.contains(&0) {
            return Err(Error::Infeasible("demand must be positive".into()));
        }
        if b.iter().sum::<usize>() % 2 == 1 {
            return Err(Error::Infeasible("total demand is odd".into()));
        }
        Ok(DegreeDemand { b })
    }

    pub fn uniform(n: usize, k: usize) -> Result<Self> {
        Self::new(vec![k; n])
    }

    pub fn get(&self, v: usize) -> usize {
        self.b[v]
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }
}

#[derive(Clone, Debug)]
enum Expansion {
    /// Expanded edge indices joining copies directly.
    Direct(Vec<usize>),
    /// Gadget node pair.
    Gadget(usize, usize),
}

/// Maps an expanded matching back to the original edge set.
#[derive(Clone, Debug)]
pub struct BackMap {
    copies: Vec<Vec<usize>>,
    expansion: Vec<Expansion>,
    expanded_edges: Vec<(usize, usize, Weight)>,
}

impl BackMap {
    pub fn copies(&self, v: usize) -> &[usize] {
        &self.copies[v]
    }

    /// Indices of original edges used by the expanded matching `mate`.
    pub fn selected(&self, mate: &[Option<usize>]) -> Vec<bool> {
        self.expansion
            .iter()
            .map(|x| match x {
                Expansion::Direct(ks) => ks.iter().any(|&k| {
                    let (i, j, _) = self.expanded_edges[k];
                    mate[i] == Some(j)
                }),
                Expansion::Gadget(a, b) => mate[*a].is_some() && mate[*a] != Some(*b),
            })
            .collect()
    }
}

fn expand(g: &GeneralGraph, d: &DegreeDemand) -> (usize, BackMap) {
    let mut next = 0;
    let copies: Vec<Vec<usize>> = (0..g.n())
        .map(|v| {
            let c: Vec<usize> = (next..next + d.get(v)).collect();
            next += d.get(v);
            c
        })
        .collect();
    let mut edges = Vec::new();
    let mut expansion = Vec::with_capacity(g.edges().len());
    for &(e, w) in g.edges() {
        let (u, v) = (e.u(), e.v());
        if d.get(u) == 1 || d.get(v) == 1 {
            let mut ks = Vec::new();
            for &cu in &copies[u] {
                for &cv in &copies[v] {
                    ks.push(edges.len());
                    edges.push((cu, cv, 2 * w));
                }
            }
            expansion.push(Expansion::Direct(ks));
        } else {
            let (a, b) = (next, next + 1);
            next += 2;
            for &cu in &copies[u] {
                edges.push((cu, a, w));
            }
            edges.push((a, b, 0));
            for &cv in &copies[v] {
                edges.push((b, cv, w));
            }
            expansion.push(Expansion::Gadget(a, b));
        }
    }
    (next, BackMap { copies, expansion, expanded_edges: edges })
}

/// Builds the expanded matching instance. Its maximum-weight perfect matching
/// weighs exactly twice the maximum-weight perfect b-matching of `g`.
pub fn expand_to_matching_instance(g: &GeneralGraph, d: &DegreeDemand) -> Result<(GeneralGraph, BackMap)> {
    if d.len() != g.n() {
        return Err(Error::Precondition("demand vector length differs from vertex count".into()));
    }
    let (n, back) = expand(g, d);
    let edges = back.expanded_edges.iter().map(|&(i, j, w)| (EdgeId::new(i, j), w)).collect();
    Ok((GeneralGraph::new(n, edges)?, back))
}

/// Solves and returns the per-edge selection together with the dual solution
/// of the expanded instance.
pub(crate) fn solve_b_matching(g: &GeneralGraph, d: &DegreeDemand) -> Result<(Vec<bool>, MatchingSolution, BackMap)> {
    if d.len() != g.n() {
        return Err(Error::Precondition("demand vector length differs from vertex count".into()));
    }
    let (n, back) = expand(g, d);
    if n % 2 == 1 {
        return Err(Error::Infeasible("expanded instance has odd order".into()));
    }
    let sol = max_weight_matching(n, &back.expanded_edges, true);
    if !sol.is_perfect() {
        return Err(Error::Infeasible("no perfect b-matching".into()));
    }
    let sel = back.selected(&sol.mate);
    Ok((sel, sol, back))
}

pub fn max_weight_perfect_b_matching(g: &GeneralGraph, d: &DegreeDemand) -> Result<BTreeSet<EdgeId>> {
    let (sel, _, _) = solve_b_matching(g, d)?;
    Ok(g.edges().iter().zip(sel).filter(|(_, s)| *s).map(|(&(e, _), _)| e).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{max_weight_perfect_matching, GeneralGraph};

    fn gg(n: usize, es: &[(usize, usize, Weight)]) -> GeneralGraph {
        GeneralGraph::new(n, es.iter().map(|&(a, b, w)| (EdgeId::new(a, b), w)).collect()).unwrap()
    }

    fn total(g: &GeneralGraph, s: &BTreeSet<EdgeId>) -> Weight {
        g.edges().iter().filter(|(e, _)| s.contains(e)).map(|x| x.1).sum()
    }

    #[test]
    fn b_one_is_plain_matching() {
        let g = gg(4, &[(0, 1, 5), (2, 3, 5), (0, 2, 3), (1, 3, 3), (0, 3, 1), (1, 2, 1)]);
        let s = max_weight_perfect_b_matching(&g, &DegreeDemand::uniform(4, 1).unwrap()).unwrap();
        let m = max_weight_perfect_matching(&g).unwrap();
        assert_eq!(s, m.pairs);
    }

    #[test]
    fn k4_uniform_two_factor() {
        let es: Vec<_> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v, 1))).collect();
        let g = gg(4, &es);
        let s = max_weight_perfect_b_matching(&g, &DegreeDemand::uniform(4, 2).unwrap()).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(total(&g, &s), 4);
        let a = max_weight_perfect_b_matching(&g, &DegreeDemand::uniform(4, 2).unwrap()).unwrap();
        assert_eq!(a, s);
    }

    #[test]
    fn triangle_uses_all_edges() {
        let g = gg(3, &[(0, 1, 2), (1, 2, 3), (0, 2, 4)]);
        let s = max_weight_perfect_b_matching(&g, &DegreeDemand::uniform(3, 2).unwrap()).unwrap();
        assert_eq!(s.len(), 3);
        let (x, back) = expand_to_matching_instance(&g, &DegreeDemand::uniform(3, 2).unwrap()).unwrap();
        let m = max_weight_perfect_matching(&x).unwrap();
        assert_eq!(m.weight, 2 * 9);
        let mut mate = vec![None; x.n()];
        for e in &m.pairs {
            mate[e.u()] = Some(e.v());
            mate[e.v()] = Some(e.u());
        }
        assert_eq!(back.selected(&mate), vec![true; 3]);
    }

    #[test]
    fn single_pair_scale() {
        let g = gg(2, &[(0, 1, 3)]);
        let (x, _) = expand_to_matching_instance(&g, &DegreeDemand::uniform(2, 1).unwrap()).unwrap();
        assert_eq!(x.n(), 2);
        assert_eq!(max_weight_perfect_matching(&x).unwrap().weight, 6);
    }

    #[test]
    fn infeasible_demands() {
        let g = gg(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        assert!(matches!(
            max_weight_perfect_b_matching(&g, &DegreeDemand::uniform(4, 2).unwrap()),
            Err(Error::Infeasible(_))
        ));
        assert!(DegreeDemand::new(vec![1, 2]).is_err());
    }
}
