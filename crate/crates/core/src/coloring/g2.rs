//! Path-2-coloring of G′₂.
//!
//! Trails are colored one unit at a time together with the matching edges at
//! their vertices: closed trails first, then cycles of the path graph G_p,
//! then paths whose border leads into an already colored trail. Inside a unit
//! the edges are taken in trail order, the matching edge at a vertex before
//! the trail edge leaving it and the border last. Each trail edge prefers the
//! color not used by the matching edge at its tail. A unit that cannot be
//! finished this way is retried in the opposite direction and then handed,
//! with everything left, to a most-constrained search.

use std::collections::{BTreeMap, BTreeSet};

use super::search::{completion_steps, Order, Outcome, Search, Step};
use super::state::{mask_colors, Color, ColorState, K2};
use crate::error::{Error, Result};
use crate::g2prime::G2Prime;
use crate::graph::EdgeId;

const UNIT_BUDGET: u64 = 50_000;
const GLOBAL_BUDGET: u64 = 300_000;

#[derive(Clone, Debug)]
pub struct G2Coloring {
    pub state: ColorState,
    pub units: usize,
    pub fallbacks: usize,
    pub trace: Vec<String>,
}

pub fn g2_requirements(g2: &G2Prime) -> Vec<(EdgeId, u8)> {
    g2.mult.iter().map(|(&e, &m)| (e, m)).collect()
}

/// Trail indices grouped into coloring units, in coloring order.
pub fn coloring_units(g2: &G2Prime) -> Vec<Vec<usize>> {
    let mut units: Vec<Vec<usize>> = Vec::new();
    let mut closed: Vec<usize> = (0..g2.trails.len()).filter(|&t| g2.trails[t].closed).collect();
    closed.sort_by_key(|&t| g2.trails[t].vertices.iter().min().copied());
    units.extend(closed.into_iter().map(|t| vec![t]));
    let next = g2.path_graph();
    let paths: Vec<usize> = (0..g2.trails.len()).filter(|&t| !g2.trails[t].closed).collect();
    let mut done = vec![false; g2.trails.len()];
    // Cycles of the functional graph G_p.
    let mut state = vec![0u8; g2.trails.len()];
    for &s in &paths {
        let mut walk = Vec::new();
        let mut p = s;
        while state[p] == 0 {
            state[p] = 1;
            walk.push(p);
            match next[p] {
                Some(q) => p = q,
                None => break,
            }
        }
        if state[p] == 1 {
            if let Some(i) = walk.iter().position(|&x| x == p) {
                if next[p].is_some() {
                    let cyc = walk[i..].to_vec();
                    for &x in &cyc {
                        done[x] = true;
                    }
                    units.push(cyc);
                }
            }
        }
        for x in walk {
            state[x] = 2;
        }
    }
    // Then sinks first.
    loop {
        let ready: Vec<usize> = paths.iter().copied().filter(|&p| !done[p] && next[p].is_none_or(|q| done[q])).collect();
        if ready.is_empty() {
            break;
        }
        for p in ready {
            done[p] = true;
            units.push(vec![p]);
        }
    }
    units
}

struct Plan {
    steps: Vec<Step>,
    /// Preferred colors for a step, by position.
    hints: Vec<Hint>,
}

#[derive(Clone, Copy)]
enum Hint {
    /// A trail edge leaving `tail`.
    Leaving(usize),
    /// A matching edge at a vertex preceded on the trail by `pred`.
    Matching { pred: Option<usize> },
    Free,
}

fn plan_unit(g2: &G2Prime, st: &ColorState, unit: &[usize], reverse: bool, m_done: &mut BTreeSet<EdgeId>) -> Plan {
    let mut steps = Vec::new();
    let mut hints = Vec::new();
    for &t in unit {
        let tr = &g2.trails[t];
        let mut vs = tr.vertices.clone();
        let mut cs: Vec<usize> = tr.copies.clone();
        if reverse && (tr.closed || g2.border(tr).is_none()) {
            if tr.closed {
                vs[1..].reverse();
            } else {
                vs.reverse();
            }
            cs.reverse();
        }
        let k = cs.len();
        let mut push_m = |v: usize, pred: Option<usize>, steps: &mut Vec<Step>, hints: &mut Vec<Hint>| {
            if let Some(e) = g2.mate_edge(v) {
                if m_done.insert(e) {
                    steps.push(Step { edge: st.index_of(e).unwrap(), count: 1 });
                    hints.push(Hint::Matching { pred });
                }
            }
        };
        for i in 0..k {
            let pred = if i > 0 { Some(vs[i - 1]) } else if tr.closed { vs.last().copied() } else { None };
            push_m(vs[i], pred, &mut steps, &mut hints);
            if !tr.closed && i == k - 1 {
                push_m(vs[k], Some(vs[k - 1]), &mut steps, &mut hints);
            }
            steps.push(Step { edge: st.index_of(g2.copies[cs[i]].edge).unwrap(), count: 1 });
            hints.push(Hint::Leaving(vs[i]));
        }
    }
    Plan { steps, hints }
}

fn m_color(g2: &G2Prime, st: &ColorState, v: usize) -> Option<Color> {
    g2.mate_edge(v).and_then(|e| {
        let m = st.colors_of(e);
        (m.count_ones() == 1).then(|| m.trailing_zeros() as Color)
    })
}

/// No two edges at a vertex other than its double edge share a color while a
/// double edge is there.
fn invariant_ok(st: &ColorState, e: EdgeId) -> bool {
    e.ends().iter().all(|&u| {
        let inc = st.incident(u);
        let doubles: Vec<usize> = inc.iter().copied().filter(|&i| st.need(i) == 2).collect();
        if doubles.is_empty() {
            return true;
        }
        doubles.iter().all(|&d| {
            let mut seen = 0u8;
            for &i in inc.iter().filter(|&&i| i != d) {
                let c = st.colors(i);
                if seen & c != 0 {
                    return false;
                }
                seen |= c;
            }
            true
        })
    })
}

fn run_plan(g2: &G2Prime, st: &mut ColorState, plan: &Plan, order: Order, budget: u64) -> Outcome {
    let by_step: BTreeMap<(usize, usize), Hint> = plan.steps.iter().zip(&plan.hints).enumerate().map(|(i, (s, h))| ((s.edge, i), *h)).collect();
    let first_hint = |edge: usize| by_step.range((edge, 0)..(edge + 1, 0)).map(|(_, h)| *h).find(|_| true);
    let prefer = |s: &ColorState, step: &Step| -> Vec<Color> {
        match first_hint(step.edge) {
            Some(Hint::Leaving(tail)) => match m_color(g2, s, tail) {
                Some(k) => K2.iter().copied().filter(|&c| c != k).chain([k]).collect(),
                None => K2.to_vec(),
            },
            Some(Hint::Matching { pred }) => {
                let avoid = if s.need(step.edge) == 2 { pred.and_then(|p| m_color(g2, s, p)) } else { None };
                match avoid {
                    Some(a) => K2.iter().copied().filter(|&c| c != a).chain([a]).collect(),
                    None => K2.to_vec(),
                }
            }
            Some(Hint::Free) | None => K2.to_vec(),
        }
    };
    let check = |s: &ColorState, step: &Step| invariant_ok(s, s.edge(step.edge));
    let search = Search { order, prefer: &prefer, check: &check, budget };
    search.run(st, &plan.steps).0
}

pub fn path2color_g2prime(g2: &G2Prime) -> Result<G2Coloring> {
    let mut st = ColorState::new(g2.n, &K2, g2_requirements(g2))?;
    let units = coloring_units(g2);
    let mut m_done = BTreeSet::new();
    let mut trace = Vec::new();
    let mut fallbacks = 0;
    for (ui, unit) in units.iter().enumerate() {
        let before = m_done.clone();
        let plan = plan_unit(g2, &st, unit, false, &mut m_done);
        if run_plan(g2, &mut st, &plan, Order::Static, UNIT_BUDGET) == Outcome::Solved {
            continue;
        }
        m_done = before;
        let plan = plan_unit(g2, &st, unit, true, &mut m_done);
        if run_plan(g2, &mut st, &plan, Order::Static, UNIT_BUDGET) == Outcome::Solved {
            trace.push(format!("unit {ui}: reversed"));
            continue;
        }
        trace.push(format!("unit {ui}: most-constrained completion"));
        fallbacks += 1;
        break;
    }
    if !st.is_complete() {
        let steps = completion_steps(&st, 0..st.len());
        let plan = Plan { hints: steps.iter().map(|_| Hint::Free).collect(), steps };
        if run_plan(g2, &mut st, &plan, Order::MostConstrained, GLOBAL_BUDGET) != Outcome::Solved {
            // Start over without the committed units.
            let mut fresh = ColorState::new(g2.n, &K2, g2_requirements(g2))?;
            let steps = completion_steps(&fresh, 0..fresh.len());
            let plan = Plan { hints: steps.iter().map(|_| Hint::Free).collect(), steps };
            if run_plan(g2, &mut fresh, &plan, Order::MostConstrained, GLOBAL_BUDGET) != Outcome::Solved {
                return Err(Error::Internal("G'2 coloring failed".into()));
            }
            trace.push("restarted from scratch".into());
            fallbacks += 1;
            st = fresh;
        }
    }
    for k in K2 {
        if !crate::graph::is_vertex_disjoint_paths(&st.class(k), g2.n) {
            return Err(Error::Internal(format!("class {k} of G'2 is not a path set")));
        }
    }
    debug_assert!(g2.mult.keys().all(|&e| mask_colors(st.colors_of(e)).count() as u8 == g2.mult[&e]));
    Ok(G2Coloring { state: st, units: units.len(), fallbacks, trace })
}
