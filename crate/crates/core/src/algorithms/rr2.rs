//! Two agents: alternate choosing categories by surplus, then capped round robin.

use super::crr::{crr_two_agents, surplus};
use super::{categories, invariant, refuse, Algorithm, Guarantee, RunStats, SolveOptions, Solution};
use crate::error::Result;
use crate::fairness::envy_matrix_partial;
use crate::model::{Agent, Allocation, CategoryStructure, Instance};
use crate::value::Value;
use num_traits::Zero;

/// Categories ordered by `agent`'s surplus when it leads capped round robin,
/// largest first, lower index first on ties.
pub(crate) fn category_order(inst: &Instance, cs: &CategoryStructure, agent: Agent) -> Result<Vec<usize>> {
    let vals = [inst.valuations()[0].as_slice(), inst.valuations()[1].as_slice()];
    let mut keyed: Vec<(Value, usize)> = Vec::with_capacity(cs.num_categories());
    for (h, items) in cs.categories.iter().enumerate() {
        let caps = [cs.capacity(0, h), cs.capacity(1, h)];
        let split = crr_two_agents(items, caps, vals, agent)?;
        let s = surplus(vals[agent], caps[agent], &split[agent], &split[1 - agent]);
        keyed.push((s, h));
    }
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    Ok(keyed.into_iter().map(|(_, h)| h).collect())
}

/// Agents take turns choosing their highest-surplus remaining category; the
/// chooser leads capped round robin on it. The first chooser is
/// `opts.order[0]` (agent 0 by default).
pub fn rr_squared(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    let who = Algorithm::RrSquared;
    if inst.num_agents() != 2 {
        return refuse(who, "exactly two agents");
    }
    let cs = categories(inst, who)?;
    let first = opts.sigma(2)?[0];
    let orders = [category_order(inst, &cs, 0)?, category_order(inst, &cs, 1)?];
    let vals = [inst.valuations()[0].as_slice(), inst.valuations()[1].as_slice()];
    let mut chosen = vec![false; cs.num_categories()];
    let mut x = Allocation::empty(2);
    let mut stats = RunStats::default();
    let mut active = first;
    for _ in 0..cs.num_categories() {
        let h = orders[active].iter().copied().find(|&h| !chosen[h]).expect("an unchosen category remains");
        chosen[h] = true;
        let caps = [cs.capacity(0, h), cs.capacity(1, h)];
        let split = crr_two_agents(&cs.categories[h], caps, vals, active)?;
        for (a, b) in split.into_iter().enumerate() {
            x.extend_bundle(a, b);
        }
        stats.iterations += 1;
        active = 1 - active;
    }
    if opts.verify {
        let envy = envy_matrix_partial(&x, inst)?;
        let e = envy[first][1 - first];
        invariant(e.is_zero(), &mut stats, || {
            format!("first chooser {first} has positive feasible envy {e}")
        })?;
    }
    Ok(Solution { allocation: x, algorithm: who, guarantee: Guarantee::Fef1TwoAgents, stats })
}
