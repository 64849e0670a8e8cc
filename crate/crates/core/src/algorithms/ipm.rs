//! Iterated priority matching for binary valuations under partition constraints.

use num_traits::One;

use super::{categories, invariant, refuse, Algorithm, Guarantee, RunStats, SolveOptions, Solution};
use crate::error::{Error, Result};
use crate::fairness::{envy_matrix_partial, EnvyGraph};
use crate::model::{Agent, Allocation, Instance, Item};
use crate::optimize::AgentItemGraph;
use crate::value::Value;

fn envy_order(inst: &Instance, x: &Allocation) -> Result<Vec<Agent>> {
    EnvyGraph::partial(x, inst, true)?
        .topological_order()
        .map_err(|cycle| Error::Invariant(format!("feasible envy graph has a cycle {cycle:?}")))
}

fn check_state(inst: &Instance, x: &Allocation, stats: &mut RunStats, at: &str) -> Result<()> {
    let acyclic = EnvyGraph::partial(x, inst, true)?.is_acyclic();
    invariant(acyclic, stats, || format!("{at}: feasible envy graph has a cycle"))?;
    let envy = envy_matrix_partial(x, inst)?;
    let max = envy.iter().flatten().max().copied().unwrap_or_default();
    invariant(max <= Value::one(), stats, || format!("{at}: positive feasible envy {max} exceeds 1"))
}

/// Per category, up to `max capacity` rounds of priority matching between
/// agents with spare capacity and the unallocated items they value, agents
/// prioritized by the topological order of the feasible envy graph. Items
/// left over go, in id order, to the lowest-id agent with spare capacity.
pub fn iterated_priority_matching(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    let who = Algorithm::IteratedPriorityMatching;
    let cs = categories(inst, who)?;
    if !inst.is_binary() {
        return refuse(who, "binary valuations");
    }
    let n = inst.num_agents();
    let mut x = Allocation::empty(n);
    let mut stats = RunStats::default();
    let mut first = opts.order.is_some();
    for (h, items) in cs.categories.iter().enumerate() {
        let room: usize = (0..n).map(|a| cs.capacity(a, h).min(items.len())).sum();
        if room < items.len() {
            return Err(Error::Infeasible(format!(
                "category {h} has {} items but capacities sum to {room}",
                items.len()
            )));
        }
        let mut taken = vec![0usize; n];
        let mut free: Vec<Item> = items.clone();
        let rounds = (0..n).map(|a| cs.capacity(a, h)).max().unwrap_or(0);
        for t in 0..rounds {
            let sigma = if first { opts.sigma(n)? } else { envy_order(inst, &x)? };
            first = false;
            let agents: Vec<Agent> = sigma.iter().copied().filter(|&a| taken[a] < cs.capacity(a, h)).collect();
            let graph = AgentItemGraph::new(inst, agents, free.clone());
            let pairs = graph.priority_matching(&sigma)?;
            stats.iterations += 1;
            for &(a, g) in &pairs {
                x.give(a, g);
                taken[a] += 1;
                free.retain(|&f| f != g);
            }
            if opts.verify {
                check_state(inst, &x, &mut stats, &format!("category {h}, round {}", t + 1))?;
            }
            if pairs.is_empty() {
                break;
            }
        }
        for g in free {
            let a = (0..n).find(|&a| taken[a] < cs.capacity(a, h)).ok_or_else(|| {
                Error::Internal(format!("no agent has capacity left for item {g} in category {h}"))
            })?;
            x.give(a, g);
            taken[a] += 1;
        }
        if opts.verify {
            check_state(inst, &x, &mut stats, &format!("category {h}, leftover"))?;
        }
    }
    Ok(Solution { allocation: x, algorithm: who, guarantee: Guarantee::Fef1BinaryMatching, stats })
}
