//! Certificates of a run and their independent re-check.
//!
//! A certificate records everything the pipeline built. Verification
//! recomputes what it can from the instance and checks the rest against
//! the definitions directly, without calling back into the solver.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::coloring::{mask_colors, Color, K2, K3};
use crate::cycle_cover::{find_kites, Kite};
use crate::exchange::verify::{verify_f12, F12Context};
use crate::exchange::{ExchangePair, HalfEdgeSplit, Orientation, SearchStats};
use crate::g2prime::{build_g2prime, G2Input};
use crate::gadget::{check_relaxed_cover, RelaxedCycleCover};
use crate::graph::{is_vertex_disjoint_paths, CompleteGraph, CycleCover, EdgeId, HalfEdge, Weight};
use crate::harness::oracle::{oracle_max_cycle_cover, oracle_max_tsp, COVER_LIMIT, TSP_LIMIT};
use crate::matching::Matching;
use crate::pipeline::{PipelineRun, StageLedger};
use crate::tour::{is_permutation, shrink_edge, tour_weight, Solution, SMALL};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    /// Reduced fraction `p/q`.
    pub exact: String,
    pub decimal: f64,
}

impl Ratio {
    pub fn new(p: Weight, q: Weight) -> Option<Self> {
        if q == 0 {
            return None;
        }
        let d = p.gcd(&q).max(1);
        Some(Ratio { exact: format!("{}/{}", p / d, q / d), decimal: p as f64 / q as f64 })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub detail: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, detail: Vec<String>) {
        self.checks.push(Check { name: name.into(), ok: detail.is_empty(), detail });
    }

    fn push_if(&mut self, name: &str, ok: bool, why: impl FnOnce() -> String) {
        self.push(name, if ok { Vec::new() } else { vec![why()] });
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub exchange: SearchStats,
    pub g1_fallbacks: usize,
    pub g2_fallbacks: usize,
    pub h_fallbacks: usize,
}

/// Everything built on the even instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub n: usize,
    pub ledger: StageLedger,
    pub cmax: Vec<Vec<usize>>,
    pub matching: Vec<EdgeId>,
    pub kites: Vec<Kite>,
    pub whole_edges: Vec<EdgeId>,
    pub half_edges: Vec<HalfEdge>,
    pub z1: Vec<EdgeId>,
    pub z2: Vec<EdgeId>,
    pub z: Vec<EdgeId>,
    pub f1: Vec<EdgeId>,
    pub f2: Vec<EdgeId>,
    pub orientation: Vec<(EdgeId, (usize, usize))>,
    /// Colors of G′₁ (1 to 3) and G′₂ (4 and 5) per edge.
    pub g1_colors: Vec<(EdgeId, Vec<Color>)>,
    pub g2_colors: Vec<(EdgeId, Vec<Color>)>,
    pub tour: Vec<usize>,
    pub search: SearchSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub n: usize,
    pub tour: Vec<usize>,
    pub weight: Weight,
    pub opt: Option<Weight>,
    pub ratio: Option<Ratio>,
    pub fast_odd: bool,
    /// For odd n, the edge shrunk to get the even instance.
    pub shrunk: Option<EdgeId>,
    pub stages: Option<StageRecord>,
    pub checklist: Vec<Check>,
}

fn colors_of(assign: &[(EdgeId, u8)]) -> Vec<(EdgeId, Vec<Color>)> {
    assign.iter().map(|&(e, m)| (e, mask_colors(m).collect())).collect()
}

fn stage_record(run: &PipelineRun, n: usize) -> StageRecord {
    StageRecord {
        n,
        ledger: run.ledger.clone(),
        cmax: run.cmax.cycles.clone(),
        matching: run.matching.pairs.iter().copied().collect(),
        kites: run.kites.clone(),
        whole_edges: run.c2.whole_edges.iter().copied().collect(),
        half_edges: run.c2.half_edges.iter().copied().collect(),
        z1: run.split.z1.iter().copied().collect(),
        z2: run.split.z2.iter().copied().collect(),
        z: run.split.z.iter().copied().collect(),
        f1: run.pair.f1.iter().copied().collect(),
        f2: run.pair.f2.iter().copied().collect(),
        orientation: run.orientation.arcs().collect(),
        g1_colors: colors_of(&run.k3),
        g2_colors: colors_of(&run.k2),
        tour: run.tour.order.clone(),
        search: SearchSummary {
            exchange: run.trace.exchange.clone(),
            g1_fallbacks: run.trace.g1_fallbacks,
            g2_fallbacks: run.trace.g2_fallbacks,
            h_fallbacks: run.trace.h_fallbacks,
        },
    }
}

/// Builds the certificate of `sol`, computing OPT when the oracle allows,
/// and fills the checklist by verifying it.
pub fn build_certificate(g: &CompleteGraph, sol: &Solution, fast_odd: bool) -> Certificate {
    let n = g.n();
    let opt = (n <= TSP_LIMIT).then(|| oracle_max_tsp(g).ok()).flatten();
    let mut cert = Certificate {
        schema: SCHEMA_VERSION,
        n,
        tour: sol.tour.order.clone(),
        weight: sol.tour.weight,
        opt,
        ratio: opt.and_then(|o| Ratio::new(sol.tour.weight, o)),
        fast_odd,
        shrunk: sol.shrunk,
        stages: sol.run.as_ref().map(|r| stage_record(r, if sol.shrunk.is_some() { n - 1 } else { n })),
        checklist: Vec::new(),
    };
    cert.checklist = verify_certificate(g, &cert).checks;
    cert
}

fn valid_edges(es: &[EdgeId], n: usize) -> bool {
    es.iter().all(|e| e.u() < e.v() && e.v() < n)
}

pub fn verify_certificate(g: &CompleteGraph, cert: &Certificate) -> Report {
    let mut r = Report::default();
    let n = g.n();
    r.push_if("schema", cert.schema == SCHEMA_VERSION && cert.n == n, || {
        format!("schema {} for n = {}, expected {SCHEMA_VERSION} for n = {n}", cert.schema, cert.n)
    });
    let perm = is_permutation(&cert.tour, n);
    r.push_if("tour visits every vertex once", perm, || format!("{:?}", cert.tour));
    if perm {
        let w = tour_weight(g, &cert.tour);
        r.push_if("tour weight", w == cert.weight, || format!("claimed {}, actual {w}", cert.weight));
    }

    let opt = if n <= TSP_LIMIT { oracle_max_tsp(g).ok() } else { None };
    if let Some(o) = opt {
        r.push_if("optimum", cert.opt.is_none_or(|c| c == o), || format!("claimed {:?}, oracle {o}", cert.opt));
        r.push_if("four fifths of the optimum", cert.fast_odd || 5 * cert.weight >= 4 * o, || {
            format!("5 * {} < 4 * {o}", cert.weight)
        });
    }
    if let (Some(o), Some(ratio)) = (cert.opt, &cert.ratio) {
        let expect = Ratio::new(cert.weight, o);
        r.push_if("ratio", expect.as_ref().is_some_and(|x| x.exact == ratio.exact), || {
            format!("claimed {}, expected {:?}", ratio.exact, expect.map(|x| x.exact))
        });
    }

    let Some(st) = &cert.stages else {
        r.push_if("stages present", n <= SMALL, || format!("no stage record for n = {n}"));
        return r;
    };
    let h = match (n % 2, cert.shrunk) {
        (0, None) => g.clone(),
        (1, Some(e)) if e.u() < e.v() && e.v() < n => match shrink_edge(g, e) {
            Ok(h) => h,
            Err(e) => {
                r.push("even instance", vec![e.to_string()]);
                return r;
            }
        },
        _ => {
            r.push("even instance", vec![format!("n = {n} with shrunk edge {:?}", cert.shrunk)]);
            return r;
        }
    };
    verify_stages(&h, st, &mut r);
    r
}

/// Multiplicity of every edge in a color list, checking colors against the palette.
fn color_counts(colors: &[(EdgeId, Vec<Color>)], palette: &[Color], bad: &mut Vec<String>) -> BTreeMap<EdgeId, usize> {
    let mut out = BTreeMap::new();
    for (e, cs) in colors {
        let distinct: BTreeSet<Color> = cs.iter().copied().collect();
        if distinct.len() != cs.len() || cs.iter().any(|c| !palette.contains(c)) {
            bad.push(format!("edge {e:?} has colors {cs:?}"));
        }
        *out.entry(*e).or_insert(0) += cs.len();
    }
    out
}

fn verify_stages(h: &CompleteGraph, st: &StageRecord, r: &mut Report) {
    let n = h.n();
    let l = &st.ledger;
    let all_edges = [&st.matching, &st.whole_edges, &st.z1, &st.z2, &st.z, &st.f1, &st.f2];
    if st.n != n || !all_edges.iter().all(|es| valid_edges(es, n)) {
        r.push("stage record", vec![format!("edges out of range for n = {n}")]);
        return;
    }
    let tour_ok = is_permutation(&st.tour, n);
    r.push_if("even tour visits every vertex once", tour_ok, || format!("{:?}", st.tour));

    let cmax = match CycleCover::new(n, st.cmax.clone()) {
        Ok(c) => c,
        Err(e) => {
            r.push("cycle cover", vec![e.to_string()]);
            return;
        }
    };
    let cw = cmax.weight(h);
    let mut bad = Vec::new();
    if cw != l.cmax {
        bad.push(format!("weight {cw}, ledger {}", l.cmax));
    }
    if n <= COVER_LIMIT {
        if let Ok(best) = oracle_max_cycle_cover(h) {
            if best != cw {
                bad.push(format!("weight {cw}, maximum {best}"));
            }
        }
    }
    r.push("cycle cover", bad);

    let m_set: BTreeSet<EdgeId> = st.matching.iter().copied().collect();
    let mut deg = vec![0; n];
    for e in &m_set {
        deg[e.u()] += 1;
        deg[e.v()] += 1;
    }
    let mw = h.edges_weight(&m_set);
    r.push_if("perfect matching", deg.iter().all(|&d| d == 1) && mw == l.matching, || {
        format!("degrees {deg:?}, weight {mw}, ledger {}", l.matching)
    });
    let m = Matching { pairs: m_set.clone(), weight: mw };
    let kites = find_kites(&cmax, &m);
    r.push_if("kites", kites == st.kites, || format!("recorded {} kites, found {}", st.kites.len(), kites.len()));

    let c2 = RelaxedCycleCover {
        whole_edges: st.whole_edges.iter().copied().collect(),
        half_edges: st.half_edges.iter().copied().collect(),
        weight: l.c2_doubled,
    };
    let mut bad = check_relaxed_cover(&c2, &kites, n);
    if let Some(v) = (0..n).find(|&v| c2.degree(v) != 2) {
        bad.push(format!("vertex {v} has degree {}", c2.degree(v)));
    }
    let doubled = 2 * h.edges_weight(&c2.whole_edges) + c2.half_edges.iter().map(|x| h.weight(x.edge)).sum::<Weight>();
    if doubled != l.c2_doubled {
        bad.push(format!("doubled weight {doubled}, ledger {}", l.c2_doubled));
    }
    r.push("relaxed cover", bad);

    let hs = c2.half_edge_ids();
    let z1: BTreeSet<EdgeId> = st.z1.iter().copied().collect();
    let z2: BTreeSet<EdgeId> = st.z2.iter().copied().collect();
    let z: BTreeSet<EdgeId> = st.z.iter().copied().collect();
    let mut bad = Vec::new();
    if !z1.is_disjoint(&z2) || z1.union(&z2).copied().collect::<BTreeSet<_>>() != hs {
        bad.push("Z1 and Z2 do not partition H".into());
    }
    if z != z1 && z != z2 {
        bad.push("Z is neither Z1 nor Z2".into());
    }
    for (i, k) in kites.iter().enumerate() {
        let inside = |e: &&EdgeId| k.contains(e.u()) && k.contains(e.v());
        if 2 * z.iter().filter(inside).count() != hs.iter().filter(inside).count() {
            bad.push(format!("kite {i}: Z does not hold half of its H edges"));
        }
    }
    if 2 * h.edges_weight(&z) < h.edges_weight(&hs) {
        bad.push(format!("w(Z) = {} below half of w(H) = {}", h.edges_weight(&z), h.edges_weight(&hs)));
    }
    let wz = [(h.edges_weight(&z1), l.z1), (h.edges_weight(&z2), l.z2), (h.edges_weight(&z), l.z)];
    if wz.iter().any(|(a, b)| a != b) {
        bad.push(format!("Z weights {wz:?} differ from the ledger"));
    }
    r.push("half-edge split", bad);

    let pair = ExchangePair { f1: st.f1.iter().copied().collect(), f2: st.f2.iter().copied().collect(), choices: Vec::new() };
    let split = HalfEdgeSplit { z1: z1.clone(), z2: z2.clone(), z: z.clone() };
    let orientation = Orientation::from_arcs(st.orientation.iter().copied());
    let arcs_ok = st.orientation.iter().all(|&(e, (t, hd))| EdgeId::try_new(t, hd) == Some(e))
        && st.orientation.iter().map(|x| x.0).collect::<BTreeSet<_>>() == c2.whole_edges;
    r.push_if("orientation covers I", arcs_ok, || "arcs do not match the whole edges".into());
    let mates = m.mates(n);
    let inp = G2Input { n, c2: &c2, z: &z, f1: &pair.f1, f2: &pair.f2, mates: &mates };
    match build_g2prime(&inp, &|_| true) {
        Ok(g2) => {
            let cx = F12Context {
                n,
                c2: &c2,
                kites: &kites,
                m: &m_set,
                cmax_edges: &cmax.edges().into_iter().collect(),
                orientation: &orientation,
                split: &split,
                g2: &g2,
            };
            for c in verify_f12(&pair, &cx).checks {
                r.push(&format!("exchange {}", c.name), c.witness);
            }
        }
        Err(e) => r.push("exchange sets", vec![e.to_string()]),
    }

    // Required multiplicities, from the definitions.
    let cmax_set: BTreeSet<EdgeId> = cmax.edges().into_iter().collect();
    let ind = |s: &BTreeSet<EdgeId>, e: &EdgeId| usize::from(s.contains(e));
    let mut need1: BTreeMap<EdgeId, usize> = BTreeMap::new();
    let mut need2: BTreeMap<EdgeId, usize> = BTreeMap::new();
    let universe: BTreeSet<EdgeId> =
        cmax_set.iter().chain(&m_set).chain(&pair.f1).chain(&pair.f2).chain(&c2.whole_edges).chain(&z).copied().collect();
    for e in &universe {
        let d1 = (2 * ind(&cmax_set, e) + ind(&m_set, e) + ind(&pair.f2, e)) as isize - ind(&pair.f1, e) as isize;
        let d2 = (ind(&c2.whole_edges, e) + ind(&z, e) + ind(&pair.f1, e) + ind(&m_set, e)) as isize - ind(&pair.f2, e) as isize;
        if d1 > 0 {
            need1.insert(*e, d1 as usize);
        }
        if d2 > 0 {
            need2.insert(*e, d2 as usize);
        }
    }
    for (name, colors, palette, need) in
        [("G'1 multiplicities", &st.g1_colors, &K3[..], &need1), ("G'2 multiplicities", &st.g2_colors, &K2[..], &need2)]
    {
        let mut bad = Vec::new();
        let got = color_counts(colors, palette, &mut bad);
        for e in got.keys().chain(need.keys()).collect::<BTreeSet<_>>() {
            let (a, b) = (got.get(e).copied().unwrap_or(0), need.get(e).copied().unwrap_or(0));
            if a != b {
                bad.push(format!("edge {e:?}: {a} colors, multiplicity {b}"));
            }
        }
        r.push(name, bad);
    }

    let mut classes: Vec<(Color, Vec<EdgeId>)> = Vec::new();
    for (k, colors) in K3.iter().map(|k| (*k, &st.g1_colors)).chain(K2.iter().map(|k| (*k, &st.g2_colors))) {
        classes.push((k, colors.iter().filter(|(_, cs)| cs.contains(&k)).map(|x| x.0).collect()));
    }
    let bad: Vec<String> =
        classes.iter().filter(|(_, es)| !is_vertex_disjoint_paths(es.iter(), n)).map(|(k, _)| format!("class {k}")).collect();
    r.push("color classes are path sets", bad);

    let weights: Vec<(Color, Weight)> = classes.iter().map(|(k, es)| (*k, h.edges_weight(es))).collect();
    let mut bad = Vec::new();
    if weights != l.classes {
        bad.push(format!("class weights {weights:?}, ledger {:?}", l.classes));
    }
    let best = weights.iter().map(|x| x.1).max().unwrap_or(0);
    let first = weights.iter().find(|x| x.1 == best).map(|x| x.0);
    if first != Some(l.best_class) || best != l.best_weight {
        bad.push(format!("best class {:?} of weight {best}, ledger {} of {}", first, l.best_class, l.best_weight));
    }
    let total: Weight = weights.iter().map(|x| x.1).sum();
    if total != l.g1_total + l.g2_total {
        bad.push(format!("classes sum to {total}, multigraphs weigh {}", l.g1_total + l.g2_total));
    }
    if l.g1_total != 2 * l.cmax + l.matching || l.g2_total != l.whole + l.z + l.matching {
        bad.push("ledger totals do not add up".into());
    }
    if l.whole != h.edges_weight(&c2.whole_edges) || l.f1 != h.edges_weight(&pair.f1) || l.f2 != h.edges_weight(&pair.f2) {
        bad.push("ledger edge weights differ".into());
    }
    r.push("class weights", bad);

    if tour_ok {
        let te: BTreeSet<EdgeId> = (0..n).filter_map(|i| EdgeId::try_new(st.tour[i], st.tour[(i + 1) % n])).collect();
        let best_edges = classes.iter().find(|c| c.0 == l.best_class).map(|c| c.1.clone()).unwrap_or_default();
        let tw = tour_weight(h, &st.tour);
        r.push_if("even tour extends the best class", best_edges.iter().all(|e| te.contains(e)) && tw == l.tour, || {
            format!("tour weight {tw}, ledger {}", l.tour)
        });
    }

    if n <= TSP_LIMIT {
        if let Ok(o) = oracle_max_tsp(h) {
            let checks = [
                ("w(C_max) >= OPT", l.cmax >= o),
                ("2 w(M) >= OPT", 2 * l.matching >= o),
                ("w(C2) >= OPT", l.c2_doubled >= 2 * o),
                ("2 (w(I) + w(Z) + w(M)) >= 3 OPT", 2 * l.g2_total >= 3 * o),
                ("2 (2 w(C_max) + w(M)) >= 5 OPT", 2 * l.g1_total >= 5 * o),
                ("5 w(best class) >= 4 OPT", 5 * l.best_weight >= 4 * o),
            ];
            let bad = checks.iter().filter(|c| !c.1).map(|c| format!("{} fails with OPT = {o}", c.0)).collect();
            r.push("weight ledger", bad);
        }
    }
}
