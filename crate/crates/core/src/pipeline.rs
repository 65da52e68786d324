//! The even-n pipeline: from the graph to five path classes and a tour.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::coloring::g1::path3color_g1;
use crate::coloring::g2::path2color_g2prime;
use crate::coloring::h::{build_h, color_h, g1prime_requirements};
use crate::coloring::{mask_colors, Color, ColorMask, ColorState, K2, K3};
use crate::cycle_cover::{find_kites, max_weight_cycle_cover, max_weight_matching_complete, Kite};
use crate::error::{Error, Result};
use crate::exchange::verify::{verify_f12, F12Context, F12Report};
use crate::exchange::{compute_exchange_sets, ExchangeInput, ExchangePair, HalfEdgeSplit, Orientation, SearchStats};
use crate::g2prime::G2Prime;
use crate::gadget::{build_split_graph, check_relaxed_cover, compute_relaxed_cycle_cover, RelaxedCycleCover};
use crate::graph::{is_vertex_disjoint_paths, CompleteGraph, CycleCover, EdgeId, Weight};
use crate::matching::Matching;
use crate::tour::{patch_paths_to_tour, select_best_class, Tour};

/// Weights of every stage, in plain units except `c2_doubled`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageLedger {
    pub cmax: Weight,
    pub matching: Weight,
    /// `2 w(I) + Σ w(h)` over half-edges.
    pub c2_doubled: Weight,
    pub whole: Weight,
    pub z1: Weight,
    pub z2: Weight,
    pub z: Weight,
    pub f1: Weight,
    pub f2: Weight,
    /// `2 w(C_max) + w(M)`.
    pub g1_total: Weight,
    /// `w(I) + w(Z) + w(M)`.
    pub g2_total: Weight,
    pub classes: Vec<(Color, Weight)>,
    pub best_class: Color,
    pub best_weight: Weight,
    pub tour: Weight,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunTrace {
    pub g1: Vec<String>,
    pub g2: Vec<String>,
    pub g1_fallbacks: usize,
    pub g2_fallbacks: usize,
    pub h_fallbacks: usize,
    pub h_nodes: u64,
    pub exchange: SearchStats,
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub cmax: CycleCover,
    pub matching: Matching,
    pub kites: Vec<Kite>,
    pub c2: RelaxedCycleCover,
    pub cover_violations: Vec<String>,
    pub split: HalfEdgeSplit,
    pub pair: ExchangePair,
    pub orientation: Orientation,
    pub g2: G2Prime,
    /// Colors 1 to 3 over G′₁.
    pub k3: Vec<(EdgeId, ColorMask)>,
    /// Colors 4 and 5 over G′₂.
    pub k2: Vec<(EdgeId, ColorMask)>,
    pub classes: Vec<(Color, Vec<EdgeId>)>,
    pub f12: F12Report,
    pub ledger: StageLedger,
    pub trace: RunTrace,
    pub tour: Tour,
}

/// Edges of color `k`, once per edge.
pub fn class_of(assign: &[(EdgeId, ColorMask)], k: Color) -> Vec<EdgeId> {
    assign.iter().filter(|(_, m)| mask_colors(*m).any(|c| c == k)).map(|&(e, _)| e).collect()
}

pub fn run_pipeline(g: &CompleteGraph) -> Result<PipelineRun> {
    let n = g.n();
    if n < 6 || n % 2 == 1 {
        return Err(Error::Precondition(format!("pipeline needs even n >= 6, got {n}")));
    }
    let cmax = max_weight_cycle_cover(g)?;
    let m = max_weight_matching_complete(g)?;
    let mates = m.mates(n);
    let kites = find_kites(&cmax, &m);
    let sg = build_split_graph(g, &kites)?;
    let c2 = compute_relaxed_cycle_cover(&sg, g)?;
    let cover_violations = check_relaxed_cover(&c2, &kites, n);
    let g1 = path3color_g1(n, &cmax, &m, &kites)?;
    let cmax_edges: BTreeSet<EdgeId> = cmax.edges().into_iter().collect();

    let mut colored: Option<(ColorState, ColorState, usize, usize, u64, Vec<String>)> = None;
    let mut accept = |pair: &ExchangePair, _: &HalfEdgeSplit, g2: &G2Prime, o: &Orientation| {
        let Ok(c2col) = path2color_g2prime(g2) else { return false };
        let reqs = g1prime_requirements(&cmax, &m, &pair.f1, &pair.f2);
        let Ok(st) = build_h(n, &g1.state, reqs) else { return false };
        let Ok(h) = color_h(st, &kites, &|e| o.arc(e)) else { return false };
        colored = Some((h.state, c2col.state, c2col.fallbacks, h.fallbacks, h.nodes, c2col.trace));
        true
    };
    let inp = ExchangeInput { g, c2: &c2, kites: &kites, mates: &mates, cmax_edges: &cmax_edges };
    let out = compute_exchange_sets(&inp, &mut accept)?;
    let (h_state, g2_state, g2_fallbacks, h_fallbacks, h_nodes, g2_trace) =
        colored.ok_or_else(|| Error::Internal("exchange sets accepted without colorings".into()))?;

    let k3 = h_state.assignment();
    let k2 = g2_state.assignment();
    let mut classes = Vec::new();
    for k in K3 {
        classes.push((k, class_of(&k3, k)));
    }
    for k in K2 {
        classes.push((k, class_of(&k2, k)));
    }
    for (k, es) in &classes {
        if !is_vertex_disjoint_paths(es, n) {
            return Err(Error::Internal(format!("class {k} is not a path set")));
        }
    }
    let (best_class, best, best_weight) = select_best_class(&classes, g);
    let tour = patch_paths_to_tour(&best, g)?;

    let m_set = m.pairs.clone();
    let f12 = verify_f12(
        &out.pair,
        &F12Context {
            n,
            c2: &c2,
            kites: &kites,
            m: &m_set,
            cmax_edges: &cmax_edges,
            orientation: &out.orientation,
            split: &out.split,
            g2: &out.g2,
        },
    );
    let whole = c2.whole_weight(g);
    let z = g.edges_weight(&out.split.z);
    let ledger = StageLedger {
        cmax: cmax.weight(g),
        matching: m.weight,
        c2_doubled: c2.weight,
        whole,
        z1: g.edges_weight(&out.split.z1),
        z2: g.edges_weight(&out.split.z2),
        z,
        f1: g.edges_weight(&out.pair.f1),
        f2: g.edges_weight(&out.pair.f2),
        g1_total: 2 * cmax.weight(g) + m.weight,
        g2_total: whole + z + m.weight,
        classes: classes.iter().map(|(k, es)| (*k, g.edges_weight(es))).collect(),
        best_class,
        best_weight,
        tour: tour.weight,
    };
    let trace = RunTrace {
        g1: g1.trace,
        g2: g2_trace,
        g1_fallbacks: g1.fallbacks,
        g2_fallbacks,
        h_fallbacks,
        h_nodes,
        exchange: out.stats,
    };
    Ok(PipelineRun {
        cmax,
        matching: m,
        kites,
        c2,
        cover_violations,
        split: out.split,
        pair: out.pair,
        orientation: out.orientation,
        g2: out.g2,
        k3,
        k2,
        classes,
        f12,
        ledger,
        trace,
        tour,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::generate::{generate_instance, Family};
    use crate::harness::oracle::oracle_max_tsp;

    #[test]
    fn small_instances_meet_the_bound() {
        for family in Family::ALL {
            for seed in 0..10 {
                let inst = generate_instance(family, 8, seed).unwrap();
                let run = run_pipeline(&inst.graph).unwrap();
                let opt = oracle_max_tsp(&inst.graph).unwrap();
                assert!(5 * run.tour.weight >= 4 * opt, "{}: {} vs {opt}", inst.name, run.tour.weight);
                assert!(run.f12.all_ok(), "{}: {:?}", inst.name, run.f12.failed());
                assert!(run.cover_violations.is_empty());
                let total: Weight = run.ledger.classes.iter().map(|c| c.1).sum();
                assert_eq!(total, run.ledger.g1_total + run.ledger.g2_total);
            }
        }
    }

    #[test]
    fn rejects_odd_n() {
        let g = CompleteGraph::from_fn(5, |_, _| 1).unwrap();
        assert!(run_pipeline(&g).is_err());
    }
}
