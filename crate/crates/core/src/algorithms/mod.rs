//! Allocation algorithms and the dispatcher that picks one per setting.

mod crr;
mod dispatch;
mod ipm;
mod per_category;
mod rr2;
mod swaps;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use crr::{capped_round_robin, category_value, crr_two_agents, surplus};
pub use dispatch::{dispatch, select, solve, Selection};
pub use ipm::iterated_priority_matching;
pub use per_category::{back_and_forth_crr, crr_single_category, per_category_crr, per_category_rr};
pub use rr2::rr_squared;
pub use swaps::{cut_and_choose, iterated_swaps, iterated_swaps_from};

use crate::error::{capability, input, Error, Result};
use crate::model::{Agent, Allocation, CategoryStructure, Instance};
use crate::value::{serde_values, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    SingleAgent,
    Crr,
    BackAndForthCrr,
    PerCategoryCrr,
    PerCategoryRr,
    IteratedPriorityMatching,
    RrSquared,
    IteratedSwaps,
    CutAndChoose,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::SingleAgent,
        Algorithm::Crr,
        Algorithm::BackAndForthCrr,
        Algorithm::PerCategoryCrr,
        Algorithm::PerCategoryRr,
        Algorithm::IteratedPriorityMatching,
        Algorithm::RrSquared,
        Algorithm::IteratedSwaps,
        Algorithm::CutAndChoose,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SingleAgent => "single_agent",
            Algorithm::Crr => "crr",
            Algorithm::BackAndForthCrr => "back_and_forth_crr",
            Algorithm::PerCategoryCrr => "per_category_crr",
            Algorithm::PerCategoryRr => "per_category_rr",
            Algorithm::IteratedPriorityMatching => "iterated_priority_matching",
            Algorithm::RrSquared => "rr_squared",
            Algorithm::IteratedSwaps => "iterated_swaps",
            Algorithm::CutAndChoose => "cut_and_choose",
        }
    }

    pub fn run(self, inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
        match self {
            Algorithm::SingleAgent => dispatch::single_agent(inst),
            Algorithm::Crr => crr_single_category(inst, opts),
            Algorithm::BackAndForthCrr => back_and_forth_crr(inst, opts),
            Algorithm::PerCategoryCrr => per_category_crr(inst, opts),
            Algorithm::PerCategoryRr => per_category_rr(inst, opts),
            Algorithm::IteratedPriorityMatching => iterated_priority_matching(inst, opts),
            Algorithm::RrSquared => rr_squared(inst, opts),
            Algorithm::IteratedSwaps => iterated_swaps(inst, opts),
            Algorithm::CutAndChoose => cut_and_choose(inst, opts),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        if s == "cut_and_choose_two_agents" {
            return Ok(Algorithm::CutAndChoose);
        }
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
                Error::Input(format!("unknown algorithm {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// What an algorithm's output is proven to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guarantee {
    /// Everything goes to the only agent.
    Complete,
    /// F-EF1, with earlier agents in the picking order not envying later ones.
    Fef1PickingOrder,
    /// F-EF1 from alternating the picking order across two categories.
    Fef1BackAndForth,
    /// F-EF1 and Pareto efficient (identical valuations).
    Fef1Pareto,
    /// EF1 under identical constraints, from envy-cycle rotation.
    Ef1CycleRotation,
    /// F-EF1 for binary valuations; Pareto efficient with 0/1 capacities.
    Fef1BinaryMatching,
    /// F-EF1 for two agents; the first chooser does not envy the other.
    Fef1TwoAgents,
    /// EF1 and maximum welfare (binary valuations, at most three agents).
    Ef1MaxWelfare,
    /// EF1 and Pareto efficient (identical valuations).
    Ef1Pareto,
    /// EF1, with the choosing agent envy-free.
    Ef1CutAndChoose,
}

impl Guarantee {
    pub fn name(self) -> &'static str {
        match self {
            Guarantee::Complete => "complete",
            Guarantee::Fef1PickingOrder => "fef1_picking_order",
            Guarantee::Fef1BackAndForth => "fef1_back_and_forth",
            Guarantee::Fef1Pareto => "fef1_pareto",
            Guarantee::Ef1CycleRotation => "ef1_cycle_rotation",
            Guarantee::Fef1BinaryMatching => "fef1_binary_matching",
            Guarantee::Fef1TwoAgents => "fef1_two_agents",
            Guarantee::Ef1MaxWelfare => "ef1_max_welfare",
            Guarantee::Ef1Pareto => "ef1_pareto",
            Guarantee::Ef1CutAndChoose => "ef1_cut_and_choose",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Guarantee::Complete => "a single agent receives every item",
            Guarantee::Fef1PickingOrder => {
                "capped round robin output is F-EF1; an agent never F-envies agents who pick after it"
            }
            Guarantee::Fef1BackAndForth => {
                "capped round robin forward on the first category and backward on the second is F-EF1"
            }
            Guarantee::Fef1Pareto => {
                "with identical valuations, per-category capped round robin in envy-graph order is F-EF1 and Pareto efficient"
            }
            Guarantee::Ef1CycleRotation => {
                "per-category round robin with envy-cycle rotation is EF1 under identical capacities"
            }
            Guarantee::Fef1BinaryMatching => {
                "iterated priority matching is F-EF1 for binary valuations, and Pareto efficient when capacities are 0 or 1"
            }
            Guarantee::Fef1TwoAgents => {
                "two-agent category selection by surplus is F-EF1; the agent who chooses first is F-envy-free"
            }
            Guarantee::Ef1MaxWelfare => {
                "smart swaps from a welfare-maximizing start reach an EF1 allocation of maximum welfare"
            }
            Guarantee::Ef1Pareto => "swaps under identical valuations reach an EF1 allocation, Pareto efficient",
            Guarantee::Ef1CutAndChoose => {
                "cut-and-choose over an EF1 split for the first valuation is EF1, and envy-free for the chooser"
            }
        }
    }
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Agent order overriding the default (lowest id first) where an algorithm
    /// takes one; for `rr_squared` its first entry chooses first.
    pub order: Option<Vec<Agent>>,
    /// Check mid-run invariants and fail with [`Error::Invariant`] on violation.
    pub verify: bool,
}

impl SolveOptions {
    pub fn verified() -> Self {
        SolveOptions { order: None, verify: true }
    }

    pub(crate) fn sigma(&self, n: usize) -> Result<Vec<Agent>> {
        match &self.order {
            None => Ok((0..n).collect()),
            Some(order) => {
                validate_order(order, n)?;
                Ok(order.clone())
            }
        }
    }
}

pub(crate) fn validate_order(order: &[Agent], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&a| a >= n || std::mem::replace(&mut seen[a], true)) {
        return input(format!("order {order:?} is not a permutation of the {n} agents"));
    }
    Ok(())
}

/// Counters and traces collected during a run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    /// Rounds, matching iterations or swaps, depending on the algorithm.
    pub iterations: usize,
    /// Mid-run invariant checks performed in verification mode.
    pub invariant_checks: usize,
    /// Envy-cycle rotations.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub rotations: usize,
    /// Swap potential before each swap and at the end.
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "serde_values")]
    pub potential: Vec<Value>,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub allocation: Allocation,
    pub algorithm: Algorithm,
    pub guarantee: Guarantee,
    pub stats: RunStats,
}

pub(crate) fn categories(inst: &Instance, who: Algorithm) -> Result<CategoryStructure> {
    inst.category_structure().ok_or_else(|| {
        Error::Capability(format!(
            "{who} needs partition-matroid constraints over the same categories for every agent"
        ))
    })
}

pub(crate) fn invariant(ok: bool, stats: &mut RunStats, msg: impl FnOnce() -> String) -> Result<()> {
    stats.invariant_checks += 1;
    if ok {
        Ok(())
    } else {
        Err(Error::Invariant(msg()))
    }
}

pub(crate) fn refuse<T>(who: Algorithm, why: &str) -> Result<T> {
    capability(format!("{who} requires {why}"))
}

#[cfg(test)]
mod tests;
