//! Picks the strongest applicable algorithm for an instance.

use super::{Algorithm, Guarantee, RunStats, SolveOptions, Solution};
use crate::constraints::SetSystemKind;
use crate::error::{capability, Error, Result};
use crate::model::{Allocation, Constraint, Instance};

/// Outcome of algorithm selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    Run(Algorithm),
    /// A fair allocation may not exist in this setting.
    Impossible { reason: String, fixture: &'static str },
    /// No algorithm with a guarantee covers this setting.
    Open(String),
}

pub(super) fn single_agent(inst: &Instance) -> Result<Solution> {
    if inst.num_agents() != 1 {
        return capability("single_agent requires exactly one agent");
    }
    let all: Vec<usize> = (0..inst.num_items()).collect();
    if !inst.is_feasible_for(0, &all) {
        return Err(Error::Infeasible("the only agent cannot take every item".into()));
    }
    Ok(Solution {
        allocation: Allocation::new(vec![all]),
        algorithm: Algorithm::SingleAgent,
        guarantee: Guarantee::Complete,
        stats: RunStats::default(),
    })
}

fn set_system_fixture(inst: &Instance) -> Option<(SetSystemKind, &'static str)> {
    inst.constraints().iter().find_map(|c| match c {
        Constraint::SetSystem(s) => Some(match s.kind() {
            SetSystemKind::Budget => (SetSystemKind::Budget, "ex3.5-budget"),
            SetSystemKind::ConflictGraph => (SetSystemKind::ConflictGraph, "ex3.4-conflict"),
            kind => (kind, "ex3.3-matching"),
        }),
        Constraint::Matroid(_) => None,
    })
}

/// Selection rules, first match wins:
/// one agent; non-matroid constraints are refused; partition constraints
/// over different categories are refused; shared categories go to
/// per-category CRR (identical valuations), iterated priority matching
/// (binary), RR-squared (two agents), back-and-forth CRR (at most two
/// categories) or per-category round robin (identical capacities); an
/// identical matroid goes to iterated swaps or cut-and-choose.
pub fn select(inst: &Instance) -> Selection {
    let n = inst.num_agents();
    if n == 1 {
        return Selection::Run(Algorithm::SingleAgent);
    }
    if let Some((kind, fixture)) = set_system_fixture(inst) {
        return Selection::Impossible {
            reason: format!(
                "{kind} constraints are not matroids and can force complementary items, \
                 in which case no complete EF1 allocation exists"
            ),
            fixture,
        };
    }
    if inst.all_partition() {
        let Some(cs) = inst.category_structure() else {
            return Selection::Impossible {
                reason: "partition constraints with different categories per agent may admit no F-EF1 allocation"
                    .into(),
                fixture: "ex3.2-heterogeneous-categories",
            };
        };
        if inst.identical_valuations() {
            return Selection::Run(Algorithm::PerCategoryCrr);
        }
        if inst.is_binary() {
            return Selection::Run(Algorithm::IteratedPriorityMatching);
        }
        if n == 2 {
            return Selection::Run(Algorithm::RrSquared);
        }
        if cs.num_categories() <= 2 {
            return Selection::Run(Algorithm::BackAndForthCrr);
        }
        if cs.capacities.windows(2).all(|w| w[0] == w[1]) {
            return Selection::Run(Algorithm::PerCategoryRr);
        }
        return Selection::Open(
            "F-EF1 for three or more agents with additive valuations and heterogeneous capacities \
             over three or more categories is an open problem"
                .into(),
        );
    }
    if inst.shared_matroid().is_some() {
        if inst.identical_valuations() {
            return Selection::Run(Algorithm::IteratedSwaps);
        }
        if n == 2 {
            return Selection::Run(Algorithm::CutAndChoose);
        }
        if inst.is_binary() && n <= 3 {
            return Selection::Run(Algorithm::IteratedSwaps);
        }
        return Selection::Open(
            "EF1 under an identical matroid is open for four or more agents with binary valuations \
             and for three or more agents with additive valuations"
                .into(),
        );
    }
    Selection::Open(
        "EF1 under heterogeneous matroid constraints beyond partitions over shared categories is open".into(),
    )
}

/// Runs the algorithm [`select`] chooses.
pub fn dispatch(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    match select(inst) {
        Selection::Run(a) => a.run(inst, opts),
        Selection::Impossible { reason, fixture } => Err(Error::Impossible { reason, fixture }),
        Selection::Open(msg) => capability(msg),
    }
}

/// Runs `algorithm` when given, otherwise dispatches.
pub fn solve(inst: &Instance, algorithm: Option<Algorithm>, opts: &SolveOptions) -> Result<Solution> {
    match algorithm {
        Some(a) => a.run(inst, opts),
        None => dispatch(inst, opts),
    }
}
