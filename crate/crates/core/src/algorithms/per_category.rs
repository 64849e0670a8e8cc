//! Category-by-category round robin variants for partition constraints.

use super::crr::{capped_round_robin, category_value};
use super::{categories, invariant, refuse, Algorithm, Guarantee, RunStats, SolveOptions, Solution};
use crate::error::{Error, Result};
use crate::fairness::EnvyGraph;
use crate::model::{Agent, Allocation, CategoryStructure, Instance};

fn run_category(
    inst: &Instance,
    cs: &CategoryStructure,
    h: usize,
    sigma: &[Agent],
    x: &mut Allocation,
) -> Result<Vec<Vec<usize>>> {
    let bundles = capped_round_robin(&cs.categories[h], &cs.column(h), inst.valuations(), sigma)?;
    for (a, b) in bundles.iter().enumerate() {
        x.extend_bundle(a, b.iter().copied());
    }
    Ok(bundles)
}

/// Within one category, an agent earlier in `sigma` values its own share at
/// least as much as the best feasible part of any later agent's share.
fn check_picking_order(
    inst: &Instance,
    cs: &CategoryStructure,
    h: usize,
    sigma: &[Agent],
    shares: &[Vec<usize>],
    stats: &mut RunStats,
) -> Result<()> {
    for (p, &i) in sigma.iter().enumerate() {
        let v = &inst.valuations()[i];
        let cap = cs.capacity(i, h);
        let own = category_value(v, cap, &shares[i]);
        for &j in &sigma[p + 1..] {
            let other = category_value(v, cap, &shares[j]);
            invariant(other <= own, stats, || {
                format!("category {h}: agent {i} picks before agent {j} but envies its share")
            })?;
        }
    }
    Ok(())
}

fn topological(inst: &Instance, x: &Allocation, stats: &mut RunStats, verify: bool) -> Result<Vec<Agent>> {
    let graph = EnvyGraph::partial(x, inst, true)?;
    let order = graph.topological_order();
    if verify {
        invariant(order.is_ok(), stats, || "feasible envy graph has a cycle".into())?;
    }
    order.map_err(|cycle| Error::Invariant(format!("feasible envy graph has a cycle {cycle:?}")))
}

/// Capped round robin on an instance with a single category.
pub fn crr_single_category(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    let cs = categories(inst, Algorithm::Crr)?;
    if cs.num_categories() > 1 {
        return refuse(Algorithm::Crr, "a single category");
    }
    let sigma = opts.sigma(inst.num_agents())?;
    let mut x = Allocation::empty(inst.num_agents());
    let mut stats = RunStats::default();
    if cs.num_categories() == 1 {
        let shares = run_category(inst, &cs, 0, &sigma, &mut x)?;
        stats.iterations = 1;
        if opts.verify {
            check_picking_order(inst, &cs, 0, &sigma, &shares, &mut stats)?;
        }
    }
    Ok(Solution { allocation: x, algorithm: Algorithm::Crr, guarantee: Guarantee::Fef1PickingOrder, stats })
}

/// Capped round robin on the first category, then in reverse order on the second.
pub fn back_and_forth_crr(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    let who = Algorithm::BackAndForthCrr;
    let cs = categories(inst, who)?;
    if cs.num_categories() > 2 {
        return refuse(who, "at most two categories");
    }
    let sigma = opts.sigma(inst.num_agents())?;
    let mut x = Allocation::empty(inst.num_agents());
    let mut stats = RunStats::default();
    for h in 0..cs.num_categories() {
        let order: Vec<Agent> = if h == 0 { sigma.clone() } else { sigma.iter().rev().copied().collect() };
        let shares = run_category(inst, &cs, h, &order, &mut x)?;
        stats.iterations += 1;
        if opts.verify {
            check_picking_order(inst, &cs, h, &order, &shares, &mut stats)?;
        }
    }
    Ok(Solution { allocation: x, algorithm: who, guarantee: Guarantee::Fef1BackAndForth, stats })
}

/// Identical valuations: each category by capped round robin in the
/// topological order of the current feasible envy graph.
pub fn per_category_crr(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    let who = Algorithm::PerCategoryCrr;
    let cs = categories(inst, who)?;
    if !inst.identical_valuations() {
        return refuse(who, "identical valuations");
    }
    let mut x = Allocation::empty(inst.num_agents());
    let mut stats = RunStats::default();
    let mut sigma = opts.sigma(inst.num_agents())?;
    for h in 0..cs.num_categories() {
        if h > 0 {
            sigma = topological(inst, &x, &mut stats, opts.verify)?;
        }
        let shares = run_category(inst, &cs, h, &sigma, &mut x)?;
        stats.iterations += 1;
        if opts.verify {
            check_picking_order(inst, &cs, h, &sigma, &shares, &mut stats)?;
        }
    }
    if opts.verify {
        topological(inst, &x, &mut stats, true)?;
    }
    Ok(Solution { allocation: x, algorithm: who, guarantee: Guarantee::Fef1Pareto, stats })
}

/// Identical capacities: round robin per category, rotating bundles along
/// envy cycles until the envy graph is acyclic, and picking in topological order.
pub fn per_category_rr(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    let who = Algorithm::PerCategoryRr;
    let cs = categories(inst, who)?;
    if cs.capacities.windows(2).any(|w| w[0] != w[1]) {
        return refuse(who, "identical capacities (rotating bundles breaks heterogeneous capacities)");
    }
    let mut x = Allocation::empty(inst.num_agents());
    let mut stats = RunStats::default();
    let mut sigma = opts.sigma(inst.num_agents())?;
    for h in 0..cs.num_categories() {
        run_category(inst, &cs, h, &sigma, &mut x)?;
        stats.iterations += 1;
        sigma = loop {
            match EnvyGraph::partial(&x, inst, true)?.topological_order() {
                Ok(order) => break order,
                Err(cycle) => {
                    let old: Vec<Vec<usize>> = cycle.iter().map(|&a| x.bundle(a).to_vec()).collect();
                    let mut bundles = x.clone().into_bundles();
                    for (k, &a) in cycle.iter().enumerate() {
                        bundles[a] = old[(k + 1) % cycle.len()].clone();
                    }
                    x = Allocation::new(bundles);
                    stats.rotations += 1;
                }
            }
        };
        if opts.verify {
            let feasible = inst.agents().all(|a| inst.is_feasible_for(a, x.bundle(a)));
            invariant(feasible, &mut stats, || format!("category {h}: a rotated bundle is infeasible"))?;
        }
    }
    Ok(Solution { allocation: x, algorithm: who, guarantee: Guarantee::Ef1CycleRotation, stats })
}
