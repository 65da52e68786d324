//! Batch runs over generated instances with ratio and ledger statistics.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::cycle_cover::max_weight_cycle_cover;
use crate::error::{Error, Result};
use crate::graph::Weight;
use crate::harness::certificate::build_certificate;
use crate::harness::generate::{generate_instance, Family};
use crate::tour::{solve, SolveOptions};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub families: Vec<Family>,
    pub sizes: Vec<usize>,
    /// Inclusive seed range.
    pub seeds: (u64, u64),
    pub parallel: usize,
    pub fast_odd: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceResult {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub weight: Weight,
    /// OPT, or the maximum cycle cover weight when n is too large.
    pub bound: Weight,
    pub exact: bool,
    pub checks_ok: bool,
    pub failed: Vec<String>,
    pub cmax: Option<Weight>,
    pub matching: Option<Weight>,
    pub g2_total: Option<Weight>,
    pub millis: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub family: Family,
    pub n: usize,
    pub instances: usize,
    pub exact: usize,
    pub min_ratio: f64,
    pub mean_ratio: f64,
    /// Instances with 5 ALG < 4 OPT.
    pub below_bound: usize,
    pub check_failures: usize,
    pub mean_cmax_over_bound: f64,
    pub mean_matching_over_bound: f64,
    pub mean_g2_over_bound: f64,
    pub median_millis: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub instances: Vec<InstanceResult>,
}

impl BenchReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.below_bound == 0 && r.check_failures == 0)
    }

    pub fn table(&self) -> String {
        let mut s = format!(
            "{:<24} {:>4} {:>5} {:>5} {:>8} {:>8} {:>5} {:>5} {:>7} {:>7} {:>7} {:>9}\n",
            "family", "n", "runs", "exact", "min", "mean", "below", "fail", "cmax", "2M", "G2", "ms(med)"
        );
        for r in &self.rows {
            s += &format!(
                "{:<24} {:>4} {:>5} {:>5} {:>8.4} {:>8.4} {:>5} {:>5} {:>7.3} {:>7.3} {:>7.3} {:>9.2}\n",
                r.family.name(),
                r.n,
                r.instances,
                r.exact,
                r.min_ratio,
                r.mean_ratio,
                r.below_bound,
                r.check_failures,
                r.mean_cmax_over_bound,
                r.mean_matching_over_bound,
                r.mean_g2_over_bound,
                r.median_millis
            );
        }
        s
    }
}

fn run_one(family: Family, n: usize, seed: u64, fast_odd: bool) -> Result<InstanceResult> {
    let inst = generate_instance(family, n, seed)?;
    let g = &inst.graph;
    let t = Instant::now();
    let sol = solve(g, SolveOptions { fast_odd })?;
    let millis = t.elapsed().as_secs_f64() * 1e3;
    let cert = build_certificate(g, &sol, fast_odd);
    let (bound, exact) = match cert.opt {
        Some(o) => (o, true),
        None => (max_weight_cycle_cover(g)?.weight(g), false),
    };
    let ledger = cert.stages.as_ref().map(|s| &s.ledger);
    let failed: Vec<String> = cert.checklist.iter().filter(|c| !c.ok).map(|c| c.name.clone()).collect();
    Ok(InstanceResult {
        family,
        n,
        seed,
        weight: cert.weight,
        bound,
        exact,
        checks_ok: failed.is_empty(),
        failed,
        cmax: ledger.map(|l| l.cmax),
        matching: ledger.map(|l| l.matching),
        g2_total: ledger.map(|l| l.g2_total),
        millis,
    })
}

fn ratio(a: Weight, b: Weight) -> f64 {
    if b == 0 {
        1.0
    } else {
        a as f64 / b as f64
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.seeds.0 > cfg.seeds.1 {
        return Err(Error::Precondition(format!("empty seed range {}..{}", cfg.seeds.0, cfg.seeds.1)));
    }
    let mut jobs = Vec::new();
    for &f in &cfg.families {
        for &n in &cfg.sizes {
            for s in cfg.seeds.0..=cfg.seeds.1 {
                jobs.push((f, n, s));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallel.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let results: Vec<Result<InstanceResult>> =
        pool.install(|| jobs.par_iter().map(|&(f, n, s)| run_one(f, n, s, cfg.fast_odd)).collect());
    let instances: Vec<InstanceResult> = results.into_iter().collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for &f in &cfg.families {
        for &n in &cfg.sizes {
            let rs: Vec<&InstanceResult> = instances.iter().filter(|r| r.family == f && r.n == n).collect();
            let mut ms: Vec<f64> = rs.iter().map(|r| r.millis).collect();
            ms.sort_by(f64::total_cmp);
            let ratios: Vec<f64> = rs.iter().map(|r| ratio(r.weight, r.bound)).collect();
            let over = |x: fn(&InstanceResult) -> Option<Weight>, k: Weight| {
                mean(rs.iter().filter_map(|r| x(r).map(|w| ratio(k * w, r.bound))))
            };
            rows.push(BenchRow {
                family: f,
                n,
                instances: rs.len(),
                exact: rs.iter().filter(|r| r.exact).count(),
                min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
                mean_ratio: mean(ratios.iter().copied()),
                below_bound: rs.iter().filter(|r| r.exact && 5 * r.weight < 4 * r.bound).count(),
                check_failures: rs.iter().filter(|r| !r.checks_ok).count(),
                mean_cmax_over_bound: over(|r| r.cmax, 1),
                mean_matching_over_bound: over(|r| r.matching, 2),
                mean_g2_over_bound: over(|r| r.g2_total, 1),
                median_millis: ms.get(ms.len() / 2).copied().unwrap_or(0.0),
            });
        }
    }
    Ok(BenchReport { rows, instances })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bench_is_clean() {
        let cfg = BenchConfig {
            families: vec![Family::UniformRandom, Family::KiteHeavy],
            sizes: vec![6, 7],
            seeds: (0, 4),
            parallel: 2,
            fast_odd: false,
        };
        let rep = run_bench(&cfg).unwrap();
        assert_eq!(rep.rows.len(), 4);
        assert!(rep.all_ok(), "{}", rep.table());
        assert!(rep.rows.iter().all(|r| r.instances == 5 && r.exact == 5 && r.min_ratio >= 0.8));
        assert!(rep.table().lines().count() == 5);
    }
}
