//! Instance representation and structural validators.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dsu::Dsu;
use crate::error::{Error, Result};

pub type Weight = i64;

/// Undirected edge stored with `u < v`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId {
    u: usize,
    v: usize,
}

impl EdgeId {
    /// Panics on a self-loop.
    pub fn new(a: usize, b: usize) -> Self {
        Self::try_new(a, b).expect("self-loop edge")
    }

    pub fn try_new(a: usize, b: usize) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(EdgeId { u: a, v: b }),
            std::cmp::Ordering::Greater => Some(EdgeId { u: b, v: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn u(self) -> usize {
        self.u
    }

    pub fn v(self) -> usize {
        self.v
    }

    pub fn ends(self) -> [usize; 2] {
        [self.u, self.v]
    }

    pub fn contains(self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite to `x`. Panics if `x` is not an endpoint.
    pub fn other(self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            assert_eq!(x, self.v, "vertex not on edge");
            self.u
        }
    }

    pub fn shares_vertex(self, o: EdgeId) -> bool {
        self.contains(o.u) || self.contains(o.v)
    }
}

impl fmt::Debug for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

/// The half of `edge` that contains `endpoint`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct HalfEdge {
    pub edge: EdgeId,
    pub endpoint: usize,
}

impl HalfEdge {
    pub fn new(edge: EdgeId, endpoint: usize) -> Self {
        assert!(edge.contains(endpoint), "half-edge endpoint not on edge");
        HalfEdge { edge, endpoint }
    }
}

/// Complete undirected graph with nonnegative integer weights.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompleteGraph {
    n: usize,
    w: Vec<Weight>,
}

impl CompleteGraph {
    /// Builds from a weight function evaluated on every pair `u < v`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Weight) -> Result<Self> {
        if n < 3 {
            return Err(Error::Instance(format!("need at least 3 vertices, got {n}")));
        }
        let mut w = vec![0; n * n];
        for u in 0..n {
            for v in u + 1..n {
                let x = f(u, v);
                if x < 0 {
                    return Err(Error::Instance(format!("negative weight {x} on ({u},{v})")));
                }
                w[u * n + v] = x;
                w[v * n + u] = x;
            }
        }
        Ok(CompleteGraph { n, w })
    }

    /// Builds from the row-major upper triangle (`n(n-1)/2` entries).
    pub fn from_upper_triangle(n: usize, tri: &[Weight]) -> Result<Self> {
        if n >= 2 && tri.len() != n * (n - 1) / 2 {
            return Err(Error::Instance(format!(
                "expected {} weights for n = {n}, got {}",
                n * (n - 1) / 2,
                tri.len()
            )));
        }
        let mut it = tri.iter().copied();
        Self::from_fn(n, |_, _| it.next().unwrap_or(0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self, u: usize, v: usize) -> Weight {
        debug_assert!(u != v);
        self.w[u * self.n + v]
    }

    pub fn weight(&self, e: EdgeId) -> Weight {
        self.w[e.u * self.n + e.v]
    }

    pub fn upper_triangle(&self) -> Vec<Weight> {
        let mut out = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for u in 0..self.n {
            for v in u + 1..self.n {
                out.push(self.w(u, v));
            }
        }
        out
    }

    pub fn max_weight(&self) -> Weight {
        self.w.iter().copied().max().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.n).flat_map(move |u| (u + 1..self.n).map(move |v| EdgeId { u, v }))
    }

    pub fn edges_weight<'a>(&self, es: impl IntoIterator<Item = &'a EdgeId>) -> Weight {
        es.into_iter().map(|&e| self.weight(e)).sum()
    }

    /// Row of weights from `u` (entry `u` itself is 0).
    pub fn row(&self, u: usize) -> &[Weight] {
        &self.w[u * self.n..(u + 1) * self.n]
    }
}

/// Builds a validated instance from an explicit pair table.
///
/// Entries may be given in either orientation; conflicting duplicates are rejected.
pub fn build_complete_graph(n: usize, weights: &BTreeMap<(usize, usize), Weight>) -> Result<CompleteGraph> {
    let mut canon: BTreeMap<EdgeId, Weight> = BTreeMap::new();
    for (&(a, b), &x) in weights {
        if a >= n || b >= n {
            return Err(Error::Instance(format!("pair ({a},{b}) out of range")));
        }
        let e = EdgeId::try_new(a, b).ok_or_else(|| Error::Instance(format!("self-loop at {a}")))?;
        if x < 0 {
            return Err(Error::Instance(format!("negative weight {x} on ({a},{b})")));
        }
        if let Some(&old) = canon.get(&e) {
            if old != x {
                return Err(Error::Instance(format!("asymmetric weights on {e:?}: {old} vs {x}")));
            }
        }
        canon.insert(e, x);
    }
    let mut missing = None;
    let g = CompleteGraph::from_fn(n, |u, v| match canon.get(&EdgeId { u, v }) {
        Some(&x) => x,
        None => {
            missing.get_or_insert((u, v));
            0
        }
    })?;
    if let Some((u, v)) = missing {
        return Err(Error::Instance(format!("missing weight for pair ({u},{v})")));
    }
    Ok(g)
}

/// Edge multiset over a complete graph; multiplicities are at most 3.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Multigraph {
    mult: BTreeMap<EdgeId, u8>,
}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, e: EdgeId, k: u8) -> Result<()> {
        let m = self.mult.entry(e).or_insert(0);
        if *m + k > 3 {
            return Err(Error::Internal(format!("multiplicity of {e:?} would exceed 3")));
        }
        *m += k;
        Ok(())
    }

    pub fn remove(&mut self, e: EdgeId, k: u8) -> Result<()> {
        let m = self.mult.get_mut(&e).filter(|m| **m >= k);
        match m {
            Some(m) => {
                *m -= k;
                if *m == 0 {
                    self.mult.remove(&e);
                }
                Ok(())
            }
            None => Err(Error::Internal(format!("removing absent copy of {e:?}"))),
        }
    }

    pub fn mult(&self, e: EdgeId) -> u8 {
        self.mult.get(&e).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, u8)> + '_ {
        self.mult.iter().map(|(&e, &m)| (e, m))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.mult.iter().filter(|(e, _)| e.contains(v)).map(|(_, &m)| m as usize).sum()
    }

    pub fn degrees(&self, n: usize) -> Vec<usize> {
        let mut d = vec![0; n];
        for (e, m) in self.iter() {
            d[e.u] += m as usize;
            d[e.v] += m as usize;
        }
        d
    }

    pub fn total_copies(&self) -> usize {
        self.mult.values().map(|&m| m as usize).sum()
    }
}

pub fn multigraph_weight(m: &Multigraph, g: &CompleteGraph) -> Weight {
    m.iter().map(|(e, k)| k as Weight * g.weight(e)).sum()
}

/// True iff the edge set has max degree 2 and contains no cycle.
pub fn is_vertex_disjoint_paths<'a>(edges: impl IntoIterator<Item = &'a EdgeId>, n: usize) -> bool {
    let mut deg = vec![0u8; n];
    let mut dsu = Dsu::new(n);
    for &e in edges {
        if e.v >= n {
            return false;
        }
        deg[e.u] += 1;
        deg[e.v] += 1;
        if deg[e.u] > 2 || deg[e.v] > 2 || !dsu.union(e.u, e.v) {
            return false;
        }
    }
    true
}

/// Every vertex of the cycle cover lies on exactly one cycle.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CycleCover {
    pub cycles: Vec<Vec<usize>>,
}

impl CycleCover {
    /// Validates and canonicalizes: each cycle starts at its minimum vertex and
    /// proceeds toward the smaller of that vertex's two neighbours.
    pub fn new(n: usize, cycles: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(cycles.len());
        for c in cycles {
            if c.len() < 3 {
                return Err(Error::Internal(format!("cycle {c:?} shorter than 3")));
            }
            for &v in &c {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Internal(format!("vertex {v} repeated or out of range")));
                }
            }
            out.push(canonical_cycle(&c));
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Internal("cycle cover misses a vertex".into()));
        }
        out.sort();
        Ok(CycleCover { cycles: out })
    }

    /// Decodes a 2-regular edge set.
    pub fn from_edges(n: usize, edges: &[EdgeId]) -> Result<Self> {
        let mut adj = vec![Vec::with_capacity(2); n];
        for e in edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        if adj.iter().any(|a| a.len() != 2) {
            return Err(Error::Internal("edge set is not 2-regular".into()));
        }
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let (mut prev, mut cur) = (s, adj[s][0]);
            while cur != s {
                if seen[cur] {
                    return Err(Error::Internal("malformed 2-factor".into()));
                }
                seen[cur] = true;
                c.push(cur);
                let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                prev = cur;
                cur = next;
            }
            cycles.push(c);
        }
        Self::new(n, cycles)
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self.cycles.iter().flat_map(|c| cycle_edges(c)).collect();
        out.sort();
        out
    }

    pub fn weight(&self, g: &CompleteGraph) -> Weight {
        self.cycles.iter().flat_map(|c| cycle_edges(c)).map(|e| g.weight(e)).sum()
    }

    /// Cycle index of every vertex.
    pub fn cycle_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (i, c) in self.cycles.iter().enumerate() {
            for &v in c {
                out[v] = i;
            }
        }
        out
    }
}

pub fn cycle_edges(c: &[usize]) -> impl Iterator<Item = EdgeId> + '_ {
    (0..c.len()).map(move |i| EdgeId::new(c[i], c[(i + 1) % c.len()]))
}

fn canonical_cycle(c: &[usize]) -> Vec<usize> {
    let k = c.len();
    let i = (0..k).min_by_key(|&i| c[i]).unwrap();
    let fwd = c[(i + 1) % k];
    let back = c[(i + k - 1) % k];
    if fwd <= back {
        (0..k).map(|j| c[(i + j) % k]).collect()
    } else {
        (0..k).map(|j| c[(i + k - j) % k]).collect()
    }
}
