//! Run reports in line-oriented text or JSON.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algorithms::{Algorithm, Guarantee, RunStats, Solution};
use crate::error::{Error, Result};
use crate::fairness::{FairnessReport, ParetoBasis, ParetoVerdict};
use crate::model::{Allocation, Instance};
use crate::value::{format_product, format_value, Value};

pub const REPORT_SCHEMA: &str = "fairdiv-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(Error::Input(format!("unknown format {s:?}; expected text or json"))),
        }
    }
}

/// Outcome of one solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub schema: String,
    pub instance: String,
    pub algorithm: Algorithm,
    pub guarantee: Guarantee,
    pub guarantee_description: String,
    pub allocation: Allocation,
    pub fairness: FairnessReport,
    pub stats: RunStats,
    /// Only recorded on request, so default reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn new(instance: &str, inst: &Instance, solution: &Solution, pareto: bool) -> Result<Self> {
        Ok(RunReport {
            schema: REPORT_SCHEMA.into(),
            instance: instance.into(),
            algorithm: solution.algorithm,
            guarantee: solution.guarantee,
            guarantee_description: solution.guarantee.description().into(),
            allocation: solution.allocation.clone(),
            fairness: FairnessReport::new(&solution.allocation, inst, pareto)?,
            stats: solution.stats.clone(),
            wall_time_ms: None,
        })
    }

    /// Feasible, and F-EF1 unless a single agent holds everything.
    /// Under identical constraints F-EF1 and EF1 coincide.
    pub fn guarantee_holds(&self) -> bool {
        let f = &self.fairness;
        f.feasibility.is_feasible() && (self.guarantee == Guarantee::Complete || f.fef1)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
                s.push('\n');
                s
            }
            Format::Text => self.to_text(),
        }
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let r: RunReport = serde_json::from_str(text).map_err(|e| Error::Parse(format!("report: {e}")))?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::Parse(format!("report schema {:?} is not {REPORT_SCHEMA:?}", r.schema)));
        }
        Ok(r)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{k}: {v}");
        };
        line("schema", &self.schema);
        line("instance", &self.instance);
        line("algorithm", &self.algorithm);
        line("guarantee", &self.guarantee);
        line("guarantee_description", &self.guarantee_description);
        line("allocation", &format_allocation(&self.allocation));
        fairness_lines(&self.fairness, &mut line);
        line("iterations", &self.stats.iterations);
        line("invariant_checks", &self.stats.invariant_checks);
        if self.stats.rotations > 0 {
            line("rotations", &self.stats.rotations);
        }
        if !self.stats.potential.is_empty() {
            line("potential", &format_values(&self.stats.potential));
        }
        if let Some(t) = self.wall_time_ms {
            line("wall_time_ms", &format!("{t:.3}"));
        }
        out
    }
}

pub fn format_allocation(x: &Allocation) -> String {
    serde_json::to_string(x).expect("allocations always serialize")
}

pub fn format_values(v: &[Value]) -> String {
    format!("[{}]", v.iter().map(format_value).collect::<Vec<_>>().join(", "))
}

pub fn format_pareto(p: &Option<ParetoVerdict>) -> String {
    match p {
        None => "not checked".into(),
        Some(ParetoVerdict::Unknown) => "unknown".into(),
        Some(ParetoVerdict::Dominated { witness }) => format!("dominated by {}", format_allocation(witness)),
        Some(ParetoVerdict::Efficient { basis }) => format!(
            "efficient ({})",
            match basis {
                ParetoBasis::IdenticalValuations => "identical valuations",
                ParetoBasis::Enumeration => "enumeration",
                ParetoBasis::MaxWelfare => "maximum welfare",
            }
        ),
    }
}

/// `key: value` lines for a fairness report.
pub fn fairness_lines(f: &FairnessReport, line: &mut dyn FnMut(&str, &dyn std::fmt::Display)) {
    line("feasible", &f.feasibility.describe());
    line("values", &format_values(&f.values));
    for (i, row) in f.envy.iter().enumerate() {
        line(&format!("envy[{i}]"), &format_values(row));
    }
    line("max_envy", &format_value(&f.max_envy()));
    line("f_ef", &f.fef);
    line("f_ef1", &f.fef1);
    if let Some((i, j)) = f.fef1_violation {
        line("f_ef1_violation", &format!("{i} -> {j}"));
    }
    line("weak_f_ef1", &f.weak_fef1);
    line("efx", &f.efx);
    line("ef1_unconstrained", &f.ef1_unconstrained);
    line("welfare", &format_value(&f.welfare));
    line("nash_product", &format_product(&f.nash_welfare));
    line("envy_graph_acyclic", &f.envy_graph_acyclic);
    line("pareto", &format_pareto(&f.pareto));
}

pub fn fairness_text(f: &FairnessReport) -> String {
    let mut out = String::new();
    fairness_lines(f, &mut |k, v| {
        let _ = writeln!(out, "{k}: {v}");
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{dispatch, SolveOptions};
    use crate::oracle::fixtures;

    #[test]
    fn json_round_trip_is_lossless() {
        let fx = fixtures::get("table2-mnw").unwrap();
        let sol = dispatch(&fx.instance, &SolveOptions::verified()).unwrap();
        let mut r = RunReport::new(fx.id, &fx.instance, &sol, true).unwrap();
        let back = RunReport::parse_json(&r.render(Format::Json)).unwrap();
        assert_eq!(back, r);
        r.wall_time_ms = Some(1.5);
        assert_eq!(RunReport::parse_json(&r.render(Format::Json)).unwrap(), r);
        assert!(r.guarantee_holds());
    }

    #[test]
    fn text_has_one_key_per_line() {
        let fx = fixtures::get("sec6.1-non-pe").unwrap();
        let sol = dispatch(&fx.instance, &SolveOptions::default()).unwrap();
        let text = RunReport::new(fx.id, &fx.instance, &sol, true).unwrap().to_text();
        assert!(text.lines().all(|l| l.contains(": ")));
        assert!(text.contains("algorithm: iterated_priority_matching\n"));
        assert!(text.contains("allocation: [[1,2],[0,3]]\n"));
        assert!(text.contains("pareto: dominated by "));
        assert!(!text.contains("wall_time"));
    }
}
