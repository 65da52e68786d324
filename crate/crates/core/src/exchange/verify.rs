//! Independent check of the exchange-set properties.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{ExchangePair, HalfEdgeSplit, Orientation};
use crate::cycle_cover::{Kite, KiteKind};
use crate::g2prime::G2Prime;
use crate::gadget::RelaxedCycleCover;
use crate::graph::EdgeId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub ok: bool,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct F12Report {
    pub checks: Vec<PropertyCheck>,
}

impl F12Report {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect()
    }

    fn push(&mut self, name: &str, witness: Vec<String>) {
        self.checks.push(PropertyCheck { name: name.into(), ok: witness.is_empty(), witness });
    }
}

pub struct F12Context<'a> {
    pub n: usize,
    pub c2: &'a RelaxedCycleCover,
    pub kites: &'a [Kite],
    pub m: &'a BTreeSet<EdgeId>,
    pub cmax_edges: &'a BTreeSet<EdgeId>,
    pub orientation: &'a Orientation,
    pub split: &'a HalfEdgeSplit,
    pub g2: &'a G2Prime,
}

fn inside(k: &Kite, e: EdgeId) -> bool {
    k.contains(e.u()) && k.contains(e.v())
}

pub fn verify_f12(fp: &ExchangePair, cx: &F12Context) -> F12Report {
    let mut r = F12Report::default();
    let iz = |e: &EdgeId| cx.c2.whole_edges.contains(e) || cx.split.z.contains(e);
    let f1_at = |v: usize| fp.f1.iter().filter(|e| e.contains(v)).count();
    let f2_at = |v: usize| fp.f2.iter().filter(|e| e.contains(v)).count();

    let w = fp.f1.iter().filter(|e| !cx.cmax_edges.contains(e) || (cx.m.contains(e) && iz(e))).map(|e| format!("{e:?}")).collect();
    r.push("property 1", w);
    let w = fp.f2.iter().filter(|e| !iz(e)).map(|e| format!("{e:?}")).collect();
    r.push("property 2", w);

    let mut w3 = Vec::new();
    let mut w4 = Vec::new();
    let mut w5 = Vec::new();
    let mut foot = Vec::new();
    let mut vertical = Vec::new();
    for (i, k) in cx.kites.iter().enumerate() {
        let f1: Vec<&EdgeId> = fp.f1.iter().filter(|&&e| inside(k, e)).collect();
        let f2: Vec<&EdgeId> = fp.f2.iter().filter(|&&e| inside(k, e)).collect();
        let ok = match (f1.len(), f2.len()) {
            (1, 0) => true,
            (2, 1) => k.kind == KiteKind::Four && !cx.m.contains(f2[0]),
            _ => false,
        };
        if !ok {
            w3.push(format!("kite {i}: F1 {f1:?} F2 {f2:?}"));
        }
        let outs: Vec<&EdgeId> =
            fp.f2.iter().filter(|&&e| cx.orientation.tail(e).is_some_and(|t| k.contains(t)) && !inside(k, e)).collect();
        if outs.len() != 1 {
            w4.push(format!("kite {i}: outgoing F2 edges {outs:?}"));
        }
        for &v in &k.vertices {
            if f2_at(v) > f1_at(v) + 1 {
                w5.push(format!("vertex {v}: {} F2 vs {} F1", f2_at(v), f1_at(v)));
            }
        }
        if let Some(x) = k.foot {
            if f2_at(x) >= 2 {
                foot.push(format!("foot {x} has {} F2 edges", f2_at(x)));
            }
            let touching = fp.f2.iter().filter(|e| k.contains(e.u()) || k.contains(e.v())).count();
            if touching >= 4 && !f1.iter().any(|e| e.contains(x)) {
                vertical.push(format!("kite {i} has {touching} F2 edges and F1 {f1:?} misses the foot"));
            }
        }
    }
    r.push("property 3", w3);
    r.push("property 4", w4);
    r.push("property 5", w5);
    let all = |_: usize| true;
    let v = cx.g2.violations(&all);
    let six = v.iter().filter(|s| s.starts_with("property 6")).cloned().collect();
    let seven = v.iter().filter(|s| !s.starts_with("property 6")).cloned().collect();
    r.push("property 6", six);
    r.push("property 7", seven);
    r.push("no foot with two F2 edges", foot);
    r.push("four F2 edges make a 3-kite vertical", vertical);
    let deg: Vec<String> = (0..cx.n).filter(|&v| f2_at(v) > f1_at(v) + 1).map(|v| format!("vertex {v}")).collect();
    r.push("G'1 degree at most 6", deg);
    r
}
