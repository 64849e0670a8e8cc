//! Instances, allocations and feasibility checks.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::constraints::SetSystem;
use crate::error::{input, Error, Result};
use crate::matroid::Matroid;
use crate::value::{self, Value};

/// Dense item id in `0..m`.
pub type Item = usize;
/// Dense agent id in `0..n`.
pub type Agent = usize;

/// The feasible bundles of one agent.
#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    Matroid(Matroid),
    SetSystem(SetSystem),
}

impl Constraint {
    pub fn ground_size(&self) -> usize {
        match self {
            Constraint::Matroid(m) => m.ground_size(),
            Constraint::SetSystem(s) => s.ground_size(),
        }
    }

    pub fn is_feasible(&self, set: &[Item]) -> bool {
        match self {
            Constraint::Matroid(m) => m.is_independent(set),
            Constraint::SetSystem(s) => s.is_feasible(set),
        }
    }

    pub fn as_matroid(&self) -> Option<&Matroid> {
        match self {
            Constraint::Matroid(m) => Some(m),
            Constraint::SetSystem(_) => None,
        }
    }

    pub fn is_downward_closed(&self) -> bool {
        match self {
            Constraint::Matroid(_) => true,
            Constraint::SetSystem(s) => s.is_downward_closed(),
        }
    }
}

impl From<Matroid> for Constraint {
    fn from(m: Matroid) -> Self {
        Constraint::Matroid(m)
    }
}

impl From<SetSystem> for Constraint {
    fn from(s: SetSystem) -> Self {
        Constraint::SetSystem(s)
    }
}

/// Shared category structure of a partition-matroid instance.
///
/// Only exists when every agent has a partition (or uniform) matroid over the
/// same categories; capacities may differ per agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryStructure {
    pub categories: Vec<Vec<Item>>,
    /// `capacities[agent][category]`
    pub capacities: Vec<Vec<usize>>,
}

impl CategoryStructure {
    pub fn num_categories(&self) -> usize {
        self.categories.len()
    }

    pub fn capacity(&self, agent: Agent, category: usize) -> usize {
        self.capacities[agent][category]
    }

    /// Capacities of every agent in one category.
    pub fn column(&self, category: usize) -> Vec<usize> {
        self.capacities.iter().map(|c| c[category]).collect()
    }
}

/// Agents with additive valuations and per-agent feasibility constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: Option<String>,
    valuations: Vec<Vec<Value>>,
    constraints: Vec<Constraint>,
}

impl Instance {
    /// `valuations[i][g]` is agent `i`'s value for item `g`.
    pub fn new(valuations: Vec<Vec<Value>>, constraints: Vec<Constraint>) -> Result<Self> {
        let n = valuations.len();
        if n == 0 {
            return input("an instance needs at least one agent");
        }
        if constraints.len() != n {
            return input(format!("{} agents but {} constraints", n, constraints.len()));
        }
        let m = valuations[0].len();
        for (i, row) in valuations.iter().enumerate() {
            if row.len() != m {
                return input(format!("valuation row {i} has {} entries, expected {m}", row.len()));
            }
            if let Some(g) = row.iter().position(|v| *v < Value::zero()) {
                return input(format!("agent {i} has a negative value for item {g}"));
            }
        }
        for (i, c) in constraints.iter().enumerate() {
            if c.ground_size() != m {
                return input(format!(
                    "constraint of agent {i} is over {} items, instance has {m}",
                    c.ground_size()
                ));
            }
        }
        Ok(Instance { name: None, valuations, constraints })
    }

    /// Every agent shares the same matroid.
    pub fn with_shared_matroid(valuations: Vec<Vec<Value>>, matroid: Matroid) -> Result<Self> {
        let n = valuations.len();
        Self::new(valuations, vec![Constraint::Matroid(matroid); n])
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn num_agents(&self) -> usize {
        self.valuations.len()
    }

    pub fn num_items(&self) -> usize {
        self.valuations[0].len()
    }

    pub fn agents(&self) -> std::ops::Range<Agent> {
        0..self.num_agents()
    }

    pub fn valuations(&self) -> &[Vec<Value>] {
        &self.valuations
    }

    pub fn item_value(&self, agent: Agent, item: Item) -> Value {
        self.valuations[agent][item]
    }

    /// Additive value of a set.
    pub fn value(&self, agent: Agent, set: &[Item]) -> Value {
        value::sum(set.iter().map(|&g| &self.valuations[agent][g]))
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, agent: Agent) -> &Constraint {
        &self.constraints[agent]
    }

    pub fn is_feasible_for(&self, agent: Agent, set: &[Item]) -> bool {
        self.constraints[agent].is_feasible(set)
    }

    /// All values are 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.valuations.iter().flatten().all(value::is_binary)
    }

    pub fn identical_valuations(&self) -> bool {
        self.valuations.windows(2).all(|w| w[0] == w[1])
    }

    pub fn identical_constraints(&self) -> bool {
        self.constraints.windows(2).all(|w| w[0] == w[1])
    }

    pub fn all_matroids(&self) -> bool {
        self.constraints.iter().all(|c| c.as_matroid().is_some())
    }

    /// The common matroid, when all agents share one.
    pub fn shared_matroid(&self) -> Option<&Matroid> {
        let first = self.constraints[0].as_matroid()?;
        self.identical_constraints().then_some(first)
    }

    /// Items worth exactly 1 to `agent`; only defined for binary instances.
    pub fn desired_set(&self, agent: Agent) -> Option<Vec<Item>> {
        if !self.is_binary() {
            return None;
        }
        Some((0..self.num_items()).filter(|&g| self.valuations[agent][g] == Value::from_integer(1)).collect())
    }

    /// True when every agent has a partition matroid (uniform counts as one category).
    pub fn all_partition(&self) -> bool {
        self.constraints
            .iter()
            .all(|c| c.as_matroid().and_then(Matroid::partition_view).is_some())
    }

    /// Common categories with per-agent capacities, if all agents' partitions share them.
    ///
    /// Categories follow agent 0's declaration order; empty categories are dropped.
    pub fn category_structure(&self) -> Option<CategoryStructure> {
        let views: Vec<_> = self
            .constraints
            .iter()
            .map(|c| c.as_matroid().and_then(Matroid::partition_view))
            .collect::<Option<_>>()?;
        let first = &views[0];
        let categories: Vec<Vec<Item>> =
            first.categories.iter().filter(|c| !c.is_empty()).cloned().collect();
        let mut capacities = Vec::with_capacity(views.len());
        for view in &views {
            let mut caps = vec![usize::MAX; categories.len()];
            for (cat, &cap) in view.categories.iter().zip(&view.capacities) {
                if cat.is_empty() {
                    continue;
                }
                let h = categories.iter().position(|c| c == cat)?;
                caps[h] = cap;
            }
            if caps.contains(&usize::MAX) {
                return None;
            }
            capacities.push(caps);
        }
        Some(CategoryStructure { categories, capacities })
    }

    /// Whether some complete feasible allocation exists, when this can be
    /// decided cheaply: capacity sums for shared categories, otherwise a
    /// maximum-cardinality matroid intersection. `None` for set systems.
    pub fn admits_feasible_allocation(&self) -> Option<bool> {
        if let Some(cs) = self.category_structure() {
            return Some(cs.categories.iter().enumerate().all(|(h, cat)| {
                cs.capacities.iter().map(|c| c[h].min(cat.len())).sum::<usize>() >= cat.len()
            }));
        }
        if self.all_matroids() {
            return Some(crate::optimize::max_weight_swm(self).is_ok());
        }
        None
    }

    /// Fails with [`Error::Infeasible`] when no complete feasible allocation exists.
    pub fn check_feasibility_assumption(&self) -> Result<()> {
        match self.admits_feasible_allocation() {
            Some(false) => Err(Error::Infeasible(
                "no complete allocation gives every agent a feasible bundle".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Copy with extra items worth 0 to everyone and the given constraints.
    pub(crate) fn padded(&self, extra: usize, constraints: Vec<Constraint>) -> Result<Instance> {
        let valuations = self
            .valuations
            .iter()
            .map(|row| {
                let mut row = row.clone();
                row.extend(std::iter::repeat_n(Value::zero(), extra));
                row
            })
            .collect();
        let mut inst = Instance::new(valuations, constraints)?;
        inst.name = self.name.clone();
        Ok(inst)
    }

    pub(crate) fn with_valuations(&self, valuations: Vec<Vec<Value>>) -> Result<Instance> {
        let mut inst = Instance::new(valuations, self.constraints.clone())?;
        inst.name = self.name.clone();
        Ok(inst)
    }
}

/// Bundles `X_1..X_n`; each bundle is kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Allocation {
    bundles: Vec<Vec<Item>>,
}

impl Allocation {
    pub fn new(mut bundles: Vec<Vec<Item>>) -> Self {
        for b in &mut bundles {
            b.sort_unstable();
        }
        Allocation { bundles }
    }

    pub fn empty(agents: usize) -> Self {
        Allocation { bundles: vec![Vec::new(); agents] }
    }

    pub fn num_agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundle(&self, agent: Agent) -> &[Item] {
        &self.bundles[agent]
    }

    pub fn bundles(&self) -> &[Vec<Item>] {
        &self.bundles
    }

    pub fn into_bundles(self) -> Vec<Vec<Item>> {
        self.bundles
    }

    pub fn give(&mut self, agent: Agent, item: Item) {
        let b = &mut self.bundles[agent];
        let pos = b.partition_point(|&g| g < item);
        b.insert(pos, item);
    }

    pub fn take(&mut self, agent: Agent, item: Item) -> bool {
        let b = &mut self.bundles[agent];
        match b.binary_search(&item) {
            Ok(pos) => {
                b.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn extend_bundle(&mut self, agent: Agent, items: impl IntoIterator<Item = Item>) {
        for g in items {
            self.give(agent, g);
        }
    }

    pub fn owner(&self, item: Item) -> Option<Agent> {
        self.bundles.iter().position(|b| b.binary_search(&item).is_ok())
    }

    pub fn num_allocated(&self) -> usize {
        self.bundles.iter().map(Vec::len).sum()
    }

    /// Drops every item with id `>= limit`.
    pub fn truncated(&self, limit: usize) -> Allocation {
        Allocation {
            bundles: self
                .bundles
                .iter()
                .map(|b| b.iter().copied().filter(|&g| g < limit).collect())
                .collect(),
        }
    }

    pub fn values(&self, inst: &Instance) -> Vec<Value> {
        inst.agents().map(|i| inst.value(i, self.bundle(i))).collect()
    }

    pub fn welfare(&self, inst: &Instance) -> Value {
        value::sum(&self.values(inst))
    }
}

/// Outcome of [`check_feasible`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub agent_count_matches: bool,
    pub unknown_items: Vec<Item>,
    pub overlapping_items: Vec<Item>,
    pub missing_items: Vec<Item>,
    /// Per agent: is the bundle feasible for its owner.
    pub individually_feasible: Vec<bool>,
}

impl FeasibilityReport {
    pub fn disjoint(&self) -> bool {
        self.overlapping_items.is_empty()
    }

    pub fn complete(&self) -> bool {
        self.missing_items.is_empty()
    }

    /// Disjoint, complete and every bundle feasible for its owner.
    pub fn is_feasible(&self) -> bool {
        self.agent_count_matches
            && self.unknown_items.is_empty()
            && self.disjoint()
            && self.complete()
            && self.individually_feasible.iter().all(|&b| b)
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if !self.agent_count_matches {
            parts.push("wrong number of bundles".to_string());
        }
        if !self.unknown_items.is_empty() {
            parts.push(format!("unknown items {:?}", self.unknown_items));
        }
        if !self.overlapping_items.is_empty() {
            parts.push(format!("items in several bundles {:?}", self.overlapping_items));
        }
        if !self.missing_items.is_empty() {
            parts.push(format!("unallocated items {:?}", self.missing_items));
        }
        let bad: Vec<usize> = self
            .individually_feasible
            .iter()
            .enumerate()
            .filter(|(_, &ok)| !ok)
            .map(|(i, _)| i)
            .collect();
        if !bad.is_empty() {
            parts.push(format!("infeasible bundles for agents {bad:?}"));
        }
        if parts.is_empty() {
            "feasible".into()
        } else {
            parts.join("; ")
        }
    }
}

/// Disjointness, completeness and per-agent feasibility of `x`.
pub fn check_feasible(x: &Allocation, inst: &Instance) -> FeasibilityReport {
    let m = inst.num_items();
    let mut seen = vec![0usize; m];
    let mut unknown = BTreeSet::new();
    for b in x.bundles() {
        for &g in b {
            if g < m {
                seen[g] += 1;
            } else {
                unknown.insert(g);
            }
        }
    }
    let individually_feasible = x
        .bundles()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            i < inst.num_agents()
                && b.iter().all(|&g| g < m)
                && b.windows(2).all(|w| w[0] != w[1])
                && inst.is_feasible_for(i, b)
        })
        .collect();
    FeasibilityReport {
        agent_count_matches: x.num_agents() == inst.num_agents(),
        unknown_items: unknown.into_iter().collect(),
        overlapping_items: (0..m).filter(|&g| seen[g] > 1).collect(),
        missing_items: (0..m).filter(|&g| seen[g] == 0).collect(),
        individually_feasible,
    }
}

pub(crate) fn require_feasible(x: &Allocation, inst: &Instance) -> Result<()> {
    let report = check_feasible(x, inst);
    if report.is_feasible() {
        Ok(())
    } else {
        input(format!("allocation is not feasible: {}", report.describe()))
    }
}
