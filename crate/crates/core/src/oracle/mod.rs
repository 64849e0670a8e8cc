//! Brute-force ground truth over all complete feasible allocations.

pub mod fixtures;

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{capability, Error, Result};
use crate::fairness::{self, nash_key};
use crate::model::{Allocation, Instance, Item};
use crate::value::{Product, Value};

/// Default cap on `n^m`, the number of item-to-agent assignments searched.
pub const DEFAULT_BOUND: u128 = 10_000_000;

/// Environment variable overriding [`DEFAULT_BOUND`].
pub const BOUND_ENV: &str = "FAIRDIV_ORACLE_BOUND";

/// Enumeration bound from the environment, else the default.
pub fn default_bound() -> u128 {
    std::env::var(BOUND_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BOUND)
}

fn assignments(inst: &Instance) -> Option<u128> {
    (inst.num_agents() as u128).checked_pow(u32::try_from(inst.num_items()).ok()?)
}

/// Whether the default bound admits enumerating `inst`.
pub fn within_bound(inst: &Instance) -> bool {
    Oracle::default().admits(inst)
}

/// Fairness notions the oracle can search for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Notion {
    Fef1,
    Ef1,
    Efx,
    WeakFef1,
}

impl Notion {
    pub const ALL: [Notion; 4] = [Notion::Fef1, Notion::Ef1, Notion::Efx, Notion::WeakFef1];

    pub fn name(self) -> &'static str {
        match self {
            Notion::Fef1 => "F-EF1",
            Notion::Ef1 => "EF1",
            Notion::Efx => "EFX",
            Notion::WeakFef1 => "weak-F-EF1",
        }
    }

    pub fn parse(s: &str) -> Option<Notion> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "f-ef1" | "fef1" => Some(Notion::Fef1),
            "ef1" => Some(Notion::Ef1),
            "efx" => Some(Notion::Efx),
            "weak-f-ef1" | "weak-fef1" => Some(Notion::WeakFef1),
            _ => None,
        }
    }

    /// Verdict on a complete feasible allocation.
    pub fn holds(self, x: &Allocation, inst: &Instance) -> Result<bool> {
        match self {
            Notion::Fef1 => fairness::is_fef1(x, inst),
            Notion::Ef1 => fairness::is_ef1(x, inst),
            Notion::Efx => fairness::is_efx(x, inst),
            Notion::WeakFef1 => fairness::is_weak_fef1(x, inst),
        }
    }
}

/// Exhaustive searches with a configurable enumeration bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    pub bound: u128,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { bound: default_bound() }
    }
}

impl Oracle {
    pub fn with_bound(bound: u128) -> Self {
        Oracle { bound }
    }

    pub fn admits(&self, inst: &Instance) -> bool {
        assignments(inst).is_some_and(|a| a <= self.bound)
    }

    fn check(&self, inst: &Instance) -> Result<()> {
        if self.admits(inst) {
            return Ok(());
        }
        capability(format!(
            "enumerating {}^{} assignments exceeds the oracle bound {} (set {BOUND_ENV} to raise it)",
            inst.num_agents(),
            inst.num_items(),
            self.bound
        ))
    }

    /// Calls `f` on every complete feasible allocation: items are assigned in
    /// id order, each to agents tried in id order.
    pub fn for_each_feasible(
        &self,
        inst: &Instance,
        mut f: impl FnMut(&Allocation) -> ControlFlow<()>,
    ) -> Result<()> {
        self.check(inst)?;
        let n = inst.num_agents();
        let prune: Vec<bool> = inst.constraints().iter().map(|c| c.is_downward_closed()).collect();
        let mut bundles: Vec<Vec<Item>> = vec![Vec::new(); n];
        let _ = recurse(inst, &prune, 0, &mut bundles, &mut f);
        Ok(())
    }

    pub fn enumerate_feasible(&self, inst: &Instance) -> Result<Vec<Allocation>> {
        let mut out = Vec::new();
        self.for_each_feasible(inst, |x| {
            out.push(x.clone());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    pub fn count_feasible(&self, inst: &Instance) -> Result<usize> {
        let mut count = 0;
        self.for_each_feasible(inst, |_| {
            count += 1;
            ControlFlow::Continue(())
        })?;
        Ok(count)
    }

    /// First allocation (in enumeration order) satisfying `notion`.
    pub fn exists_fair(&self, inst: &Instance, notion: Notion) -> Result<Option<Allocation>> {
        let mut found = None;
        let mut failure = None;
        self.for_each_feasible(inst, |x| match notion.holds(x, inst) {
            Ok(true) => {
                found = Some(x.clone());
                ControlFlow::Break(())
            }
            Ok(false) => ControlFlow::Continue(()),
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        })?;
        match failure {
            Some(e) => Err(e),
            None => Ok(found),
        }
    }

    /// Every allocation maximizing the number of agents with positive value,
    /// then the product of the positive values.
    pub fn mnw(&self, inst: &Instance) -> Result<MnwResult> {
        let mut best: Option<(usize, Product)> = None;
        let mut argmax = Vec::new();
        self.for_each_feasible(inst, |x| {
            let key = nash_key(&x.values(inst));
            match &best {
                Some(b) if key < *b => {}
                Some(b) if key == *b => argmax.push(x.clone()),
                _ => {
                    best = Some(key);
                    argmax = vec![x.clone()];
                }
            }
            ControlFlow::Continue(())
        })?;
        let (positive_agents, product) = best.ok_or_else(no_feasible)?;
        Ok(MnwResult { positive_agents, product, allocations: argmax })
    }

    /// Maximum total value and the first allocation attaining it.
    pub fn swm(&self, inst: &Instance) -> Result<(Value, Allocation)> {
        let mut best: Option<(Value, Allocation)> = None;
        self.for_each_feasible(inst, |x| {
            let w = x.welfare(inst);
            if best.as_ref().is_none_or(|(b, _)| w > *b) {
                best = Some((w, x.clone()));
            }
            ControlFlow::Continue(())
        })?;
        best.ok_or_else(no_feasible)
    }
}

fn no_feasible() -> Error {
    Error::Infeasible("no complete feasible allocation exists".into())
}

fn recurse(
    inst: &Instance,
    prune: &[bool],
    g: Item,
    bundles: &mut Vec<Vec<Item>>,
    f: &mut impl FnMut(&Allocation) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if g == inst.num_items() {
        if inst.agents().all(|i| prune[i] || inst.is_feasible_for(i, &bundles[i])) {
            return f(&Allocation::new(bundles.clone()));
        }
        return ControlFlow::Continue(());
    }
    for i in inst.agents() {
        bundles[i].push(g);
        if !prune[i] || inst.is_feasible_for(i, &bundles[i]) {
            recurse(inst, prune, g + 1, bundles, f)?;
        }
        bundles[i].pop();
    }
    ControlFlow::Continue(())
}

/// Maximum Nash welfare allocations.
#[derive(Debug, Clone, PartialEq)]
pub struct MnwResult {
    pub positive_agents: usize,
    /// Product of the positive values.
    pub product: Product,
    pub allocations: Vec<Allocation>,
}

pub fn for_each_feasible(inst: &Instance, f: impl FnMut(&Allocation) -> ControlFlow<()>) -> Result<()> {
    Oracle::default().for_each_feasible(inst, f)
}

pub fn enumerate_feasible(inst: &Instance) -> Result<Vec<Allocation>> {
    Oracle::default().enumerate_feasible(inst)
}

pub fn exists_fair(inst: &Instance, notion: Notion) -> Result<Option<Allocation>> {
    Oracle::default().exists_fair(inst, notion)
}

pub fn mnw(inst: &Instance) -> Result<MnwResult> {
    Oracle::default().mnw(inst)
}

pub fn swm_oracle(inst: &Instance) -> Result<(Value, Allocation)> {
    Oracle::default().swm(inst)
}
