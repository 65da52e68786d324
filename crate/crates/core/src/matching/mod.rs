//! Exact maximum-weight perfect matching and perfect b-matching.

mod blossom;
mod bmatching;
mod priced;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use blossom::{max_weight_matching, MatchingSolution};
pub use bmatching::{expand_to_matching_instance, max_weight_perfect_b_matching, BackMap, DegreeDemand};
pub(crate) use bmatching::solve_b_matching;
pub(crate) use priced::{solve_priced, PricedProblem};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Weight};

/// Simple graph given by an edge list; not necessarily complete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralGraph {
    n: usize,
    edges: Vec<(EdgeId, Weight)>,
}

impl GeneralGraph {
    /// Edges are sorted canonically; parallel edges are rejected.
    pub fn new(n: usize, mut edges: Vec<(EdgeId, Weight)>) -> Result<Self> {
        edges.sort();
        for w in edges.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Instance(format!("parallel edge {:?}", w[0].0)));
            }
        }
        if let Some((e, _)) = edges.iter().find(|(e, _)| e.v() >= n) {
            return Err(Error::Instance(format!("edge {e:?} out of range")));
        }
        Ok(GeneralGraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(EdgeId, Weight)] {
        &self.edges
    }

    pub fn weight_map(&self) -> BTreeMap<EdgeId, Weight> {
        self.edges.iter().copied().collect()
    }

    fn raw(&self) -> Vec<(usize, usize, Weight)> {
        self.edges.iter().map(|&(e, w)| (e.u(), e.v(), w)).collect()
    }
}

/// A perfect matching with its weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub pairs: BTreeSet<EdgeId>,
    pub weight: Weight,
}

impl Matching {
    /// Partner of every vertex.
    pub fn mates(&self, n: usize) -> Vec<usize> {
        let mut m = vec![usize::MAX; n];
        for e in &self.pairs {
            m[e.u()] = e.v();
            m[e.v()] = e.u();
        }
        m
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.pairs.contains(&e)
    }
}

pub fn max_weight_perfect_matching(g: &GeneralGraph) -> Result<Matching> {
    if g.n % 2 == 1 {
        return Err(Error::NoPerfectMatching);
    }
    let sol = max_weight_matching(g.n, &g.raw(), true);
    if !sol.is_perfect() {
        return Err(Error::NoPerfectMatching);
    }
    let w = g.weight_map();
    let pairs: BTreeSet<EdgeId> =
        (0..g.n).filter_map(|v| sol.mate[v].filter(|&u| u > v).map(|u| EdgeId::new(v, u))).collect();
    let weight = pairs.iter().map(|e| w[e]).sum();
    Ok(Matching { pairs, weight })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gg(n: usize, es: &[(usize, usize, Weight)]) -> GeneralGraph {
        GeneralGraph::new(n, es.iter().map(|&(a, b, w)| (EdgeId::new(a, b), w)).collect()).unwrap()
    }

    #[test]
    fn single_edge() {
        let m = max_weight_perfect_matching(&gg(2, &[(0, 1, 7)])).unwrap();
        assert_eq!(m.weight, 7);
        assert_eq!(m.pairs.len(), 1);
    }

    #[test]
    fn k4_example() {
        let g = gg(4, &[(0, 1, 5), (2, 3, 5), (0, 2, 3), (1, 3, 3), (0, 3, 1), (1, 2, 1)]);
        let m = max_weight_perfect_matching(&g).unwrap();
        assert_eq!(m.weight, 10);
        assert_eq!(m.pairs, [EdgeId::new(0, 1), EdgeId::new(2, 3)].into_iter().collect());
    }

    #[test]
    fn path_has_single_perfect_matching() {
        let g = gg(4, &[(0, 1, 1), (1, 2, 9), (2, 3, 1)]);
        let m = max_weight_perfect_matching(&g).unwrap();
        assert_eq!(m.weight, 2);
    }

    #[test]
    fn no_perfect_matching() {
        let g = gg(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]);
        assert_eq!(max_weight_perfect_matching(&g), Err(Error::NoPerfectMatching));
        assert!(GeneralGraph::new(2, vec![(EdgeId::new(0, 1), 1), (EdgeId::new(1, 0), 2)]).is_err());
    }
}
