//! Deterministic instance families.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CompleteGraph, Weight};

pub const MAX_WEIGHT: Weight = 999;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    UniformRandom,
    MetricEuclidean,
    KiteHeavy,
    AdversarialAlternating,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::UniformRandom, Family::MetricEuclidean, Family::KiteHeavy, Family::AdversarialAlternating];

    pub fn name(self) -> &'static str {
        match self {
            Family::UniformRandom => "uniform_random",
            Family::MetricEuclidean => "metric_euclidean",
            Family::KiteHeavy => "kite_heavy",
            Family::AdversarialAlternating => "adversarial_alternating",
        }
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Instance(format!("unknown family {s:?}")))
    }
}

/// A problem instance with provenance metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: CompleteGraph,
    pub name: String,
    pub seed: Option<u64>,
    pub family: Option<Family>,
}

impl Instance {
    pub fn new(graph: CompleteGraph, name: impl Into<String>) -> Self {
        Instance { graph, name: name.into(), seed: None, family: None }
    }
}

fn rng_for(family: Family, n: usize, seed: u64) -> ChaCha8Rng {
    let mix = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((n as u64) << 40) ^ (family.tag() << 56);
    ChaCha8Rng::seed_from_u64(mix)
}

pub fn generate_instance(family: Family, n: usize, seed: u64) -> Result<Instance> {
    if n < 3 {
        return Err(Error::Instance(format!("need at least 3 vertices, got {n}")));
    }
    let mut rng = rng_for(family, n, seed);
    let graph = match family {
        Family::UniformRandom => {
            let tri: Vec<Weight> = (0..n * (n - 1) / 2).map(|_| rng.gen_range(0..=MAX_WEIGHT)).collect();
            CompleteGraph::from_upper_triangle(n, &tri)?
        }
        Family::MetricEuclidean => {
            // Ceiling of Euclidean distance keeps the triangle inequality.
            let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen_range(0.0..700.0), rng.gen_range(0.0..700.0))).collect();
            CompleteGraph::from_fn(n, |u, v| {
                let (dx, dy) = (pts[u].0 - pts[v].0, pts[u].1 - pts[v].1);
                ((dx * dx + dy * dy).sqrt().ceil() as Weight).min(MAX_WEIGHT)
            })?
        }
        Family::KiteHeavy => kite_heavy(n, &mut rng)?,
        Family::AdversarialAlternating => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let mut pos = vec![0; n];
            for (i, &v) in perm.iter().enumerate() {
                pos[v] = i;
            }
            let noise: Vec<Weight> = (0..n * n).map(|_| rng.gen_range(0..40)).collect();
            CompleteGraph::from_fn(n, |u, v| {
                let (a, b) = (pos[u].min(pos[v]), pos[u].max(pos[v]));
                let base = if b - a == 1 || (a == 0 && b == n - 1) {
                    if a % 2 == 0 { 950 } else { 700 }
                } else if (b - a) % 2 == 1 {
                    650
                } else {
                    200
                };
                (base + noise[u * n + v]).min(MAX_WEIGHT)
            })?
        }
    };
    Ok(Instance { graph, name: format!("{family}-{n}-{seed}"), seed: Some(seed), family: Some(family) })
}

/// Plants heavy triangles and squares. One triangle edge and two opposite
/// square sides are heaviest, and triangle feet pair up across triangles.
fn kite_heavy(n: usize, rng: &mut ChaCha8Rng) -> Result<CompleteGraph> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut w = vec![vec![0 as Weight; n]; n];
    for (u, row) in w.iter_mut().enumerate() {
        for (v, x) in row.iter_mut().enumerate() {
            if u < v {
                *x = rng.gen_range(0..250);
            }
        }
    }
    let set = |w: &mut Vec<Vec<Weight>>, a: usize, b: usize, x: Weight| {
        let (a, b) = (a.min(b), a.max(b));
        w[a][b] = x;
    };
    let mut feet = Vec::new();
    let mut i = 0;
    while i < n {
        let left = n - i;
        // Never leave one or two vertices over.
        let size = match left {
            3..=5 => left,
            6 => 3,
            _ if rng.gen_bool(0.5) => 3,
            _ => 4,
        };
        let g = &perm[i..i + size];
        match g.len() {
            3 => {
                set(&mut w, g[0], g[1], rng.gen_range(820..900));
                set(&mut w, g[0], g[2], rng.gen_range(820..900));
                set(&mut w, g[1], g[2], rng.gen_range(960..=MAX_WEIGHT));
                feet.push(g[0]);
            }
            4 => {
                set(&mut w, g[0], g[1], rng.gen_range(960..=MAX_WEIGHT));
                set(&mut w, g[2], g[3], rng.gen_range(960..=MAX_WEIGHT));
                set(&mut w, g[1], g[2], rng.gen_range(820..900));
                set(&mut w, g[3], g[0], rng.gen_range(820..900));
            }
            _ => {
                // A heavy 5-cycle soaks up the remainder.
                for j in 0..g.len() {
                    set(&mut w, g[j], g[(j + 1) % g.len()], rng.gen_range(700..900));
                }
            }
        }
        i += g.len();
    }
    for pair in feet.chunks(2) {
        if let [a, b] = *pair {
            set(&mut w, a, b, rng.gen_range(600..750));
        }
    }
    CompleteGraph::from_fn(n, |u, v| w[u][v])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_range() {
        for f in Family::ALL {
            let a = generate_instance(f, 9, 3).unwrap();
            let b = generate_instance(f, 9, 3).unwrap();
            assert_eq!(a, b);
            assert!(a.graph.edges().all(|e| (0..=MAX_WEIGHT).contains(&a.graph.weight(e))));
            assert_ne!(a.graph, generate_instance(f, 9, 4).unwrap().graph);
        }
    }

    #[test]
    fn metric_family_is_metric() {
        let g = generate_instance(Family::MetricEuclidean, 12, 7).unwrap().graph;
        for a in 0..12 {
            for b in 0..12 {
                for c in 0..12 {
                    if a != b && b != c && a != c {
                        assert!(g.w(a, b) + g.w(b, c) >= g.w(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("nope".parse::<Family>().is_err());
    }
}
