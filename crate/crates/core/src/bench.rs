//! Seeded benchmark sweeps across settings.

use std::fmt::Write as _;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::SolveOptions;
use crate::fairness::{is_fef1, positive_feasible_envy};
use crate::generate::{self, Setting};
use crate::model::check_feasible;
use crate::value::{format_value, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub setting: Setting,
    pub algorithm: String,
    pub instances: usize,
    /// Runs returning a complete feasible allocation.
    pub solved: usize,
    pub fef1: usize,
    pub errors: usize,
    #[serde(with = "crate::value::serde_value")]
    pub max_envy: Value,
    #[serde(with = "crate::value::serde_value")]
    pub mean_welfare: Value,
    pub total_iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl BenchRow {
    pub fn all_pass(&self) -> bool {
        self.errors == 0 && self.solved == self.instances && self.fef1 == self.instances
    }
}

struct One {
    solved: bool,
    fef1: bool,
    max_envy: Value,
    welfare: Value,
    iterations: usize,
}

/// Runs `count` instances of `setting` through its algorithm.
pub fn bench_setting(setting: Setting, seed: u64, count: usize, verify: bool, timing: bool) -> BenchRow {
    let shape = setting.default_shape();
    let algorithm = setting.algorithm();
    let opts = SolveOptions { order: None, verify };
    let start = Instant::now();
    let runs: Vec<Option<One>> = (0..count as u64)
        .into_par_iter()
        .map(|k| {
            let inst = generate::instance(setting, &shape, seed, k);
            let sol = algorithm.run(&inst, &opts).ok()?;
            let x = &sol.allocation;
            let envy = positive_feasible_envy(x, &inst).ok()?;
            Some(One {
                solved: check_feasible(x, &inst).is_feasible(),
                fef1: is_fef1(x, &inst).ok()?,
                max_envy: envy.iter().flatten().max().copied().unwrap_or_else(Value::zero),
                welfare: x.welfare(&inst),
                iterations: sol.stats.iterations,
            })
        })
        .collect();
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let ok: Vec<&One> = runs.iter().flatten().collect();
    let total_welfare: Value = ok.iter().map(|r| r.welfare).sum();
    BenchRow {
        setting,
        algorithm: algorithm.to_string(),
        instances: count,
        solved: ok.iter().filter(|r| r.solved).count(),
        fef1: ok.iter().filter(|r| r.fef1).count(),
        errors: count - ok.len(),
        max_envy: ok.iter().map(|r| r.max_envy).max().unwrap_or_else(Value::zero),
        mean_welfare: if ok.is_empty() { Value::zero() } else { total_welfare / Value::from_integer(ok.len() as i64) },
        total_iterations: ok.iter().map(|r| r.iterations).sum(),
        wall_time_ms: timing.then_some(elapsed),
    }
}

pub fn bench(settings: &[Setting], seed: u64, count: usize, verify: bool, timing: bool) -> Vec<BenchRow> {
    settings.iter().map(|&s| bench_setting(s, seed, count, verify, timing)).collect()
}

pub fn table(rows: &[BenchRow]) -> String {
    let timing = rows.iter().any(|r| r.wall_time_ms.is_some());
    let mut out = String::new();
    let _ = write!(
        out,
        "{:<22} {:<27} {:>6} {:>6} {:>6} {:>6} {:>9} {:>12} {:>10}",
        "setting", "algorithm", "n", "solved", "f_ef1", "errors", "max_envy", "mean_welfare", "iterations"
    );
    if timing {
        let _ = write!(out, " {:>10}", "ms");
    }
    out.push('\n');
    for r in rows {
        let mean = format!("{:.3}", *r.mean_welfare.numer() as f64 / *r.mean_welfare.denom() as f64);
        let _ = write!(
            out,
            "{:<22} {:<27} {:>6} {:>6} {:>6} {:>6} {:>9} {:>12} {:>10}",
            r.setting.name(),
            r.algorithm,
            r.instances,
            r.solved,
            r.fef1,
            r.errors,
            format_value(&r.max_envy),
            mean,
            r.total_iterations
        );
        if let Some(t) = r.wall_time_ms {
            let _ = write!(out, " {t:>10.1}");
        }
        out.push('\n');
    }
    out
}
