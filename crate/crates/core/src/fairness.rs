//! Feasible valuations, envy notions, envy graphs, Nash welfare and Pareto checks.
//!
//! Public verifiers take complete feasible allocations. The `partial` forms
//! skip that check so algorithms can inspect intermediate states.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::ControlFlow;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{capability, Result};
use crate::model::{check_feasible, require_feasible, Agent, Allocation, Constraint, FeasibilityReport, Instance, Item};
use crate::value::{self, serde_matrix, serde_product, serde_value, serde_values, Product, Value};

/// Largest set searched exhaustively for a best feasible subset under a
/// non-matroid constraint.
pub const SUBSET_GUARD: usize = 20;

/// A maximum-value subset of `t` that is feasible for `agent`.
///
/// Matroids use the greedy rule (descending value, lower id first on ties).
/// Other set systems are searched exhaustively; ties keep the first subset
/// found in mask order.
pub fn best_feasible_subset(inst: &Instance, agent: Agent, t: &[Item]) -> Result<Vec<Item>> {
    let v = &inst.valuations()[agent];
    match inst.constraint(agent) {
        Constraint::Matroid(m) => {
            let mut order = t.to_vec();
            order.sort_by(|&a, &b| v[b].cmp(&v[a]).then(a.cmp(&b)));
            let mut best = m.greedy_independent(order);
            best.sort_unstable();
            Ok(best)
        }
        Constraint::SetSystem(s) => {
            if t.len() > SUBSET_GUARD {
                return capability(format!(
                    "best feasible subset of {} items under a non-matroid constraint exceeds the guard of {SUBSET_GUARD}",
                    t.len()
                ));
            }
            let mut best: Vec<Item> = Vec::new();
            let mut best_value = Value::zero();
            let mut found = false;
            for mask in 0u32..1 << t.len() {
                let set: Vec<Item> = {
                    let mut s: Vec<Item> = (0..t.len()).filter(|&k| mask >> k & 1 == 1).map(|k| t[k]).collect();
                    s.sort_unstable();
                    s
                };
                let val = value::sum(set.iter().map(|&g| &v[g]));
                if (!found || val > best_value) && s.is_feasible(&set) {
                    found = true;
                    best_value = val;
                    best = set;
                }
            }
            Ok(best)
        }
    }
}

/// `F_i(t)`: value of a best feasible subset of `t` for `agent`.
pub fn feasible_value(inst: &Instance, agent: Agent, t: &[Item]) -> Result<Value> {
    Ok(inst.value(agent, &best_feasible_subset(inst, agent, t)?))
}

fn without(t: &[Item], g: Item) -> Vec<Item> {
    t.iter().copied().filter(|&h| h != g).collect()
}

/// `max(0, F_i(X_j) - F_i(X_i))` for every pair; zero on the diagonal.
pub fn positive_feasible_envy(x: &Allocation, inst: &Instance) -> Result<Vec<Vec<Value>>> {
    require_feasible(x, inst)?;
    envy_matrix_partial(x, inst)
}

pub(crate) fn envy_matrix_partial(x: &Allocation, inst: &Instance) -> Result<Vec<Vec<Value>>> {
    let n = inst.num_agents();
    let mut e = vec![vec![Value::zero(); n]; n];
    for i in 0..n {
        let own = feasible_value(inst, i, x.bundle(i))?;
        for j in 0..n {
            if i != j {
                let other = feasible_value(inst, i, x.bundle(j))?;
                if other > own {
                    e[i][j] = other - own;
                }
            }
        }
    }
    Ok(e)
}

/// First pair `(i, j)` where `i` envies `j` beyond removing one item, or `None` if F-EF1.
pub fn fef1_violation(x: &Allocation, inst: &Instance) -> Result<Option<(Agent, Agent)>> {
    require_feasible(x, inst)?;
    fef1_violation_partial(x, inst)
}

pub(crate) fn fef1_violation_partial(x: &Allocation, inst: &Instance) -> Result<Option<(Agent, Agent)>> {
    for i in inst.agents() {
        let own = feasible_value(inst, i, x.bundle(i))?;
        for j in inst.agents() {
            if i == j || feasible_value(inst, i, x.bundle(j))? <= own {
                continue;
            }
            let mut ok = false;
            for &g in x.bundle(j) {
                if feasible_value(inst, i, &without(x.bundle(j), g))? <= own {
                    ok = true;
                    break;
                }
            }
            if !ok {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// For every pair, removing some single item from `X_j` leaves a set whose
/// best feasible subset is worth at most `F_i(X_i)`.
pub fn is_fef1(x: &Allocation, inst: &Instance) -> Result<bool> {
    Ok(fef1_violation(x, inst)?.is_none())
}

/// Removing one item from the greedy best feasible subset of `X_j` suffices.
pub fn weak_fef1_violation(x: &Allocation, inst: &Instance) -> Result<Option<(Agent, Agent)>> {
    require_feasible(x, inst)?;
    for i in inst.agents() {
        let own = feasible_value(inst, i, x.bundle(i))?;
        for j in inst.agents() {
            if i == j {
                continue;
            }
            let best = best_feasible_subset(inst, i, x.bundle(j))?;
            let top = best.iter().map(|&g| inst.item_value(i, g)).max().unwrap_or_else(Value::zero);
            if inst.value(i, &best) - top > own {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn is_weak_fef1(x: &Allocation, inst: &Instance) -> Result<bool> {
    Ok(weak_fef1_violation(x, inst)?.is_none())
}

/// Envy-free up to any good: `F_i(X_i) >= F_i(X_j - g)` for every `g` in `X_j`.
///
/// When both bundles are feasible for `i` (identical downward-closed
/// constraints) this is the plain form `v_i(X_i) >= v_i(X_j - g)`.
pub fn efx_violation(x: &Allocation, inst: &Instance) -> Result<Option<(Agent, Agent)>> {
    require_feasible(x, inst)?;
    for i in inst.agents() {
        let own = feasible_value(inst, i, x.bundle(i))?;
        for j in inst.agents() {
            if i == j {
                continue;
            }
            for &g in x.bundle(j) {
                if feasible_value(inst, i, &without(x.bundle(j), g))? > own {
                    return Ok(Some((i, j)));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_efx(x: &Allocation, inst: &Instance) -> Result<bool> {
    Ok(efx_violation(x, inst)?.is_none())
}

/// EF1 on raw values, ignoring constraints.
pub fn is_ef1(x: &Allocation, inst: &Instance) -> Result<bool> {
    require_feasible(x, inst)?;
    Ok(ef1_plain(x, inst))
}

fn ef1_plain(x: &Allocation, inst: &Instance) -> bool {
    inst.agents().all(|i| {
        let own = inst.value(i, x.bundle(i));
        inst.agents().all(|j| {
            let b = x.bundle(j);
            let top = b.iter().map(|&g| inst.item_value(i, g)).max().unwrap_or_else(Value::zero);
            i == j || inst.value(i, b) - top <= own
        })
    })
}

/// Directed graph with an edge `i -> j` when `i` envies `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvyGraph {
    adj: Vec<Vec<bool>>,
}

impl EnvyGraph {
    /// Feasible envy (`F_i`) when `feasible`, plain values otherwise.
    pub fn new(x: &Allocation, inst: &Instance, feasible: bool) -> Result<Self> {
        require_feasible(x, inst)?;
        Self::partial(x, inst, feasible)
    }

    pub(crate) fn partial(x: &Allocation, inst: &Instance, feasible: bool) -> Result<Self> {
        let n = inst.num_agents();
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            let val = |t: &[Item]| -> Result<Value> {
                if feasible {
                    feasible_value(inst, i, t)
                } else {
                    Ok(inst.value(i, t))
                }
            };
            let own = val(x.bundle(i))?;
            for j in 0..n {
                adj[i][j] = i != j && val(x.bundle(j))? > own;
            }
        }
        Ok(EnvyGraph { adj })
    }

    pub fn from_edges(n: usize, edges: &[(Agent, Agent)]) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for &(i, j) in edges {
            adj[i][j] = true;
        }
        EnvyGraph { adj }
    }

    pub fn num_agents(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, i: Agent, j: Agent) -> bool {
        self.adj[i][j]
    }

    pub fn edges(&self) -> Vec<(Agent, Agent)> {
        let n = self.num_agents();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| self.adj[i][j]).collect()
    }

    /// Order in which every envious agent precedes the agents it envies,
    /// lowest id first among ties; `Err` holds a cycle.
    pub fn topological_order(&self) -> std::result::Result<Vec<Agent>, Vec<Agent>> {
        let n = self.num_agents();
        let mut indeg: Vec<usize> = (0..n).map(|j| (0..n).filter(|&i| self.adj[i][j]).count()).collect();
        let mut heap: BinaryHeap<Reverse<Agent>> = (0..n).filter(|&j| indeg[j] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(i)) = heap.pop() {
            order.push(i);
            for j in 0..n {
                if self.adj[i][j] {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        heap.push(Reverse(j));
                    }
                }
            }
        }
        if order.len() == n {
            return Ok(order);
        }
        // every remaining agent has a remaining predecessor; walk backwards to a repeat
        let remaining: Vec<bool> = {
            let mut r = vec![true; n];
            for &i in &order {
                r[i] = false;
            }
            r
        };
        let start = (0..n).find(|&i| remaining[i]).expect("some agent remains");
        let mut walk = vec![start];
        let mut pos = vec![usize::MAX; n];
        pos[start] = 0;
        let mut at = start;
        loop {
            let prev = (0..n).find(|&p| remaining[p] && self.adj[p][at]).expect("remaining agents have predecessors");
            if pos[prev] != usize::MAX {
                let mut cycle: Vec<Agent> = walk[pos[prev]..].to_vec();
                cycle.reverse();
                return Err(cycle);
            }
            pos[prev] = walk.len();
            walk.push(prev);
            at = prev;
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }
}

/// Product of the agents' values.
pub fn nash_welfare(x: &Allocation, inst: &Instance) -> Result<Product> {
    require_feasible(x, inst)?;
    Ok(nash_product(&x.values(inst)))
}

pub fn nash_product(values: &[Value]) -> Product {
    values.iter().fold(Product::one(), |acc, v| acc * value::to_big(v))
}

/// Ordering key for maximum Nash welfare with zero products: more agents with
/// positive value first, then the product of the positive values.
pub fn nash_key(values: &[Value]) -> (usize, Product) {
    let positive: Vec<Value> = values.iter().copied().filter(|v| !v.is_zero()).collect();
    (positive.len(), nash_product(&positive))
}

/// Why an allocation is known to be Pareto efficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParetoBasis {
    /// Identical valuations: every complete allocation has the same total.
    IdenticalValuations,
    /// No feasible allocation dominates it.
    Enumeration,
    /// Its total welfare is the maximum.
    MaxWelfare,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ParetoVerdict {
    Efficient { basis: ParetoBasis },
    Dominated { witness: Allocation },
    Unknown,
}

impl ParetoVerdict {
    pub fn is_efficient(&self) -> Option<bool> {
        match self {
            ParetoVerdict::Efficient { .. } => Some(true),
            ParetoVerdict::Dominated { .. } => Some(false),
            ParetoVerdict::Unknown => None,
        }
    }
}

fn dominates(a: &[Value], b: &[Value]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y)
}

/// Exact by enumeration within the oracle bound; otherwise certified by
/// maximum welfare when possible, else unknown.
pub fn is_pareto_efficient(x: &Allocation, inst: &Instance) -> Result<ParetoVerdict> {
    require_feasible(x, inst)?;
    if inst.identical_valuations() {
        return Ok(ParetoVerdict::Efficient { basis: ParetoBasis::IdenticalValuations });
    }
    let values = x.values(inst);
    if crate::oracle::within_bound(inst) {
        let mut witness = None;
        crate::oracle::for_each_feasible(inst, |y| {
            if dominates(&y.values(inst), &values) {
                witness = Some(y.clone());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        return Ok(match witness {
            Some(witness) => ParetoVerdict::Dominated { witness },
            None => ParetoVerdict::Efficient { basis: ParetoBasis::Enumeration },
        });
    }
    if inst.all_matroids() {
        if let Ok(best) = crate::optimize::max_weight_swm(inst) {
            if best.welfare(inst) == x.welfare(inst) {
                return Ok(ParetoVerdict::Efficient { basis: ParetoBasis::MaxWelfare });
            }
        }
    }
    Ok(ParetoVerdict::Unknown)
}

/// Every verdict for one allocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessReport {
    pub feasibility: FeasibilityReport,
    /// `envy[i][j]` is agent `i`'s positive feasible envy towards `j`.
    #[serde(with = "serde_matrix")]
    pub envy: Vec<Vec<Value>>,
    #[serde(with = "serde_values")]
    pub values: Vec<Value>,
    pub fef: bool,
    pub fef1: bool,
    pub fef1_violation: Option<(Agent, Agent)>,
    pub weak_fef1: bool,
    pub efx: bool,
    /// EF1 on raw values, ignoring constraints.
    pub ef1_unconstrained: bool,
    #[serde(with = "serde_value")]
    pub welfare: Value,
    #[serde(with = "serde_product")]
    pub nash_welfare: Product,
    pub envy_graph_acyclic: bool,
    pub pareto: Option<ParetoVerdict>,
}

impl FairnessReport {
    /// Verdicts for `x`; Pareto efficiency only when `pareto` is set.
    pub fn new(x: &Allocation, inst: &Instance, pareto: bool) -> Result<Self> {
        let feasibility = check_feasible(x, inst);
        require_feasible(x, inst)?;
        let envy = envy_matrix_partial(x, inst)?;
        let fef1_violation = fef1_violation(x, inst)?;
        Ok(FairnessReport {
            feasibility,
            fef: envy.iter().flatten().all(Zero::is_zero),
            values: x.values(inst),
            envy,
            fef1: fef1_violation.is_none(),
            fef1_violation,
            weak_fef1: is_weak_fef1(x, inst)?,
            efx: is_efx(x, inst)?,
            ef1_unconstrained: ef1_plain(x, inst),
            welfare: x.welfare(inst),
            nash_welfare: nash_welfare(x, inst)?,
            envy_graph_acyclic: EnvyGraph::new(x, inst, true)?.is_acyclic(),
            pareto: if pareto { Some(is_pareto_efficient(x, inst)?) } else { None },
        })
    }

    /// Largest entry of the envy matrix.
    pub fn max_envy(&self) -> Value {
        self.envy.iter().flatten().max().copied().unwrap_or_else(Value::zero)
    }
}
