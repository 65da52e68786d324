//! Backtracking completion over a [`ColorState`].
//!
//! A step asks for `count` more colors on one edge. Steps run either in the
//! given order or most-constrained-first; candidate color sets are tried in
//! the order given by a preference function, so the first branch explored is
//! the constructive choice and backtracking only happens when it fails.

use super::state::{bit, mask_colors, Color, ColorMask, ColorState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub edge: usize,
    pub count: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Static,
    MostConstrained,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solved,
    Infeasible,
    BudgetExhausted,
}

/// Preferred color order for a step; colors missing from the list come last.
pub type Prefer<'a> = dyn Fn(&ColorState, &Step) -> Vec<Color> + 'a;
/// Extra acceptance test run after each step is applied.
pub type Check<'a> = dyn Fn(&ColorState, &Step) -> bool + 'a;

pub struct Search<'a> {
    pub order: Order,
    pub prefer: &'a Prefer<'a>,
    pub check: &'a Check<'a>,
    pub budget: u64,
}

pub fn no_preference(_: &ColorState, _: &Step) -> Vec<Color> {
    Vec::new()
}

pub fn accept_all(_: &ColorState, _: &Step) -> bool {
    true
}

/// Candidate color sets for `step`, best first.
pub fn options(state: &ColorState, step: &Step, prefer: &Prefer<'_>) -> Vec<ColorMask> {
    let free = state.free(step.edge);
    let r = step.count.min(state.remaining(step.edge)) as u32;
    if r == 0 {
        return vec![0];
    }
    let pref = prefer(state, step);
    let rank = |k: Color| pref.iter().position(|&p| p == k).unwrap_or(pref.len() + k as usize);
    let mut out: Vec<(usize, ColorMask)> = Vec::new();
    let mut sub = free;
    while sub != 0 {
        if sub.count_ones() == r {
            out.push((mask_colors(sub).map(rank).sum(), sub));
        }
        sub = (sub - 1) & free;
    }
    out.sort();
    out.into_iter().map(|(_, m)| m).collect()
}

struct Run<'s, 'a> {
    state: &'s mut ColorState,
    steps: &'s [Step],
    by_vertex: Vec<Vec<usize>>,
    done: Vec<bool>,
    cfg: &'s Search<'a>,
    nodes: u64,
}

impl Run<'_, '_> {
    fn options_left(&self, s: usize) -> usize {
        let st = &self.steps[s];
        let r = st.count.min(self.state.remaining(st.edge)) as u32;
        if r == 0 {
            return usize::MAX;
        }
        let f = self.state.free(st.edge).count_ones();
        if f < r {
            0
        } else {
            (1..=r).fold(1, |acc, i| acc * (f - r + i) as usize / i as usize)
        }
    }

    fn next(&self) -> Option<usize> {
        let open = (0..self.steps.len()).filter(|&s| !self.done[s]);
        match self.cfg.order {
            Order::Static => open.into_iter().next(),
            Order::MostConstrained => open.min_by_key(|&s| (self.options_left(s), s)),
        }
    }

    fn neighbours_ok(&self, s: usize) -> bool {
        let e = self.state.edge(self.steps[s].edge);
        e.ends().iter().all(|&v| self.by_vertex[v].iter().all(|&t| self.done[t] || self.options_left(t) > 0))
    }

    fn go(&mut self) -> Outcome {
        let Some(s) = self.next() else { return Outcome::Solved };
        self.nodes += 1;
        if self.nodes > self.cfg.budget {
            return Outcome::BudgetExhausted;
        }
        let step = self.steps[s];
        let opts = options(self.state, &step, self.cfg.prefer);
        self.done[s] = true;
        for m in opts {
            let cp = self.state.checkpoint();
            if !self.state.try_add_mask(step.edge, m) {
                continue;
            }
            if (self.cfg.check)(self.state, &step) && self.neighbours_ok(s) {
                match self.go() {
                    Outcome::Solved => return Outcome::Solved,
                    Outcome::BudgetExhausted => {
                        self.state.rollback(cp);
                        self.done[s] = false;
                        return Outcome::BudgetExhausted;
                    }
                    Outcome::Infeasible => {}
                }
            }
            self.state.rollback(cp);
        }
        self.done[s] = false;
        Outcome::Infeasible
    }
}

impl Search<'_> {
    /// Runs the steps. On success the colors stay in `state`; otherwise
    /// `state` is restored. Returns the outcome and the nodes visited.
    pub fn run(&self, state: &mut ColorState, steps: &[Step]) -> (Outcome, u64) {
        let mut by_vertex = vec![Vec::new(); state.n()];
        for (s, st) in steps.iter().enumerate() {
            for v in state.edge(st.edge).ends() {
                by_vertex[v].push(s);
            }
        }
        let start = state.checkpoint();
        let mut run = Run { state, steps, by_vertex, done: vec![false; steps.len()], cfg: self, nodes: 0 };
        let out = run.go();
        let nodes = run.nodes;
        if out != Outcome::Solved {
            state.rollback(start);
        }
        (out, nodes)
    }
}

/// One step per uncolored edge covering its whole remaining requirement.
pub fn completion_steps(state: &ColorState, edges: impl IntoIterator<Item = usize>) -> Vec<Step> {
    edges
        .into_iter()
        .filter(|&i| state.remaining(i) > 0)
        .map(|i| Step { edge: i, count: state.remaining(i) })
        .collect()
}

/// A preference that avoids the colors in `avoid` when it can.
pub fn avoiding(palette: &[Color], avoid: ColorMask) -> Vec<Color> {
    let mut out: Vec<Color> = palette.iter().copied().filter(|&k| avoid & bit(k) == 0).collect();
    out.extend(palette.iter().copied().filter(|&k| avoid & bit(k) != 0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::state::{K2, K3};
    use crate::graph::{is_vertex_disjoint_paths, EdgeId};

    fn search<'a>(order: Order, prefer: &'a Prefer<'a>) -> Search<'a> {
        Search { order, prefer, check: &accept_all, budget: 100_000 }
    }

    #[test]
    fn doubled_hexagon_in_three_colors() {
        // Two copies of a hexagon plus its three long chords.
        let mut reqs: Vec<(EdgeId, u8)> = (0..6).map(|i| (EdgeId::new(i, (i + 1) % 6), 2)).collect();
        reqs.extend((0..3).map(|i| (EdgeId::new(i, i + 3), 1)));
        let mut s = ColorState::new(6, &K3, reqs).unwrap();
        let steps = completion_steps(&s, 0..s.len());
        for order in [Order::Static, Order::MostConstrained] {
            let mut t = s.clone();
            let (out, _) = search(order, &no_preference).run(&mut t, &steps);
            assert_eq!(out, Outcome::Solved);
            assert!(t.is_complete());
            for k in K3 {
                assert!(is_vertex_disjoint_paths(&t.class(k), 6));
            }
        }
        // A doubled square in two colors forces a monochromatic square.
        s = ColorState::new(4, &K2, (0..4).map(|i| (EdgeId::new(i, (i + 1) % 4), 2))).unwrap();
        let steps = completion_steps(&s, 0..s.len());
        let (out, _) = search(Order::MostConstrained, &no_preference).run(&mut s, &steps);
        assert_eq!(out, Outcome::Infeasible);
        assert_eq!(s.checkpoint(), 0);
    }

    #[test]
    fn preference_is_first_branch() {
        let mut s = ColorState::new(3, &K3, [(EdgeId::new(0, 1), 1), (EdgeId::new(1, 2), 1)]).unwrap();
        let prefer = |_: &ColorState, st: &Step| if st.edge == 0 { vec![3] } else { vec![2] };
        let steps = completion_steps(&s, 0..2);
        assert_eq!(search(Order::Static, &prefer).run(&mut s, &steps).0, Outcome::Solved);
        assert_eq!(s.colors(0), bit(3));
        assert_eq!(s.colors(1), bit(2));
        assert_eq!(avoiding(&K3, bit(1)), vec![2, 3, 1]);
    }

    #[test]
    fn budget_restores_state() {
        let reqs: Vec<(EdgeId, u8)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (EdgeId::new(a, b), 1))).collect();
        let mut s = ColorState::new(5, &K2, reqs).unwrap();
        let steps = completion_steps(&s, 0..s.len());
        let cfg = Search { order: Order::Static, prefer: &no_preference, check: &accept_all, budget: 3 };
        assert_eq!(cfg.run(&mut s, &steps).0, Outcome::BudgetExhausted);
        assert_eq!(s.checkpoint(), 0);
    }
}
