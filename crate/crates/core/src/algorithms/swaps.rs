//! Iterated swaps along feasible-exchange bijections under an identical
//! base-orderable matroid.

use num_traits::Zero;

use super::{invariant, refuse, Algorithm, Guarantee, RunStats, SolveOptions, Solution};
use crate::error::{input, Error, Result};
use crate::fairness::envy_matrix_partial;
use crate::matroid::Matroid;
use crate::model::{require_feasible, Agent, Allocation, Constraint, Instance, Item};
use crate::optimize::max_weight_swm;
use crate::value::{self, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Binary,
    Identical,
}

fn mode(inst: &Instance, who: Algorithm) -> Result<Mode> {
    if inst.identical_valuations() {
        Ok(Mode::Identical)
    } else if inst.is_binary() && inst.num_agents() <= 3 {
        Ok(Mode::Binary)
    } else {
        refuse(who, "identical valuations, or binary valuations with at most three agents")
    }
}

/// The instance padded with zero-value free-extension items so that every
/// complete feasible allocation consists of bases.
struct Padded {
    inst: Instance,
    matroid: Matroid,
    original: usize,
}

fn pad(inst: &Instance, who: Algorithm) -> Result<Padded> {
    let Some(m) = inst.shared_matroid() else {
        return refuse(who, "the same matroid constraint for every agent");
    };
    let n = inst.num_agents();
    let rank = m.full_rank();
    let original = inst.num_items();
    if original > n * rank {
        return Err(Error::Infeasible(format!(
            "{original} items cannot fit into {n} independent sets of rank {rank}"
        )));
    }
    let extra = n * rank - original;
    let matroid = m.free_extend(extra);
    let padded = inst.padded(extra, vec![Constraint::Matroid(matroid.clone()); n])?;
    Ok(Padded { inst: padded, matroid, original })
}

/// Fills each bundle of `start` up to a base with the padding items, lowest agent first.
fn pad_allocation(p: &Padded, start: &Allocation) -> Allocation {
    let rank = p.matroid.full_rank();
    let mut x = start.clone();
    let mut next = p.original;
    for a in 0..x.num_agents() {
        while x.bundle(a).len() < rank && next < p.inst.num_items() {
            x.give(a, next);
            next += 1;
        }
    }
    x
}

fn envies_beyond_one(inst: &Instance, x: &Allocation, i: Agent, j: Agent) -> bool {
    let b = x.bundle(j);
    let top = b.iter().map(|&g| inst.item_value(i, g)).max().unwrap_or_else(Value::zero);
    inst.value(i, b) - top > inst.value(i, x.bundle(i))
}

fn potential(inst: &Instance, x: &Allocation) -> Result<Value> {
    Ok(value::sum(envy_matrix_partial(x, inst)?.iter().flatten()))
}

fn bijection(m: &Matroid, x: &Allocation, i: Agent, j: Agent) -> Result<Vec<(Item, Item)>> {
    m.exchange_bijection_unchecked(x.bundle(i), x.bundle(j))
        .ok_or(Error::NotBaseOrderable { envious: i, envied: j })
}

fn swap(x: &mut Allocation, i: Agent, gi: Item, j: Agent, gj: Item) {
    x.take(i, gi);
    x.take(j, gj);
    x.give(i, gj);
    x.give(j, gi);
}

/// One swap step, or `None` when the allocation is EF1.
fn step(p: &Padded, x: &mut Allocation, mode: Mode, stats: &mut RunStats, verify: bool) -> Result<Option<()>> {
    let inst = &p.inst;
    let n = inst.num_agents();
    match mode {
        Mode::Binary => {
            let Some((i, j)) = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .find(|&(i, j)| i != j && envies_beyond_one(inst, x, i, j))
            else {
                return Ok(None);
            };
            let mu = bijection(&p.matroid, x, i, j)?;
            let zero = Value::zero();
            let one = value::int(1);
            let v = |a: Agent, g: Item| inst.item_value(a, g);
            let Some(&(gi, gj)) = mu
                .iter()
                .find(|&&(gi, gj)| v(i, gi) == zero && v(j, gi) == zero && v(i, gj) == one && v(j, gj) == one)
            else {
                return input(format!(
                    "no smart swap between agents {i} and {j}: the allocation does not maximize welfare"
                ));
            };
            swap(x, i, gi, j, gj);
        }
        Mode::Identical => {
            let val = |a: Agent| inst.value(0, x.bundle(a));
            let envious: Vec<Agent> =
                (0..n).filter(|&i| (0..n).any(|j| i != j && envies_beyond_one(inst, x, i, j))).collect();
            let Some(&i) = envious.iter().min_by(|&&a, &&b| val(a).cmp(&val(b)).then(a.cmp(&b))) else {
                return Ok(None);
            };
            let j = (0..n)
                .filter(|&j| j != i && envies_beyond_one(inst, x, i, j))
                .max_by(|&a, &b| val(a).cmp(&val(b)).then(b.cmp(&a)))
                .expect("envious agent envies someone");
            let mu = bijection(&p.matroid, x, i, j)?;
            let v = |g: Item| inst.item_value(0, g);
            let &(gi, gj) = mu
                .iter()
                .max_by(|&&(a, b), &&(c, d)| (v(b) - v(a)).cmp(&(v(d) - v(c))).then(c.cmp(&a)))
                .expect("bundles are non-empty");
            let gain = v(gj) - v(gi);
            let before = val(j);
            if gain <= Value::zero() {
                return Err(Error::Internal(format!("no improving swap between agents {i} and {j}")));
            }
            if verify {
                let m = inst.num_items() as i64;
                invariant(gain * value::int(m * m) >= before, stats, || {
                    format!("swap gain {gain} is below a 1/m^2 share of the envied value {before}")
                })?;
            }
            swap(x, i, gi, j, gj);
        }
    }
    Ok(Some(()))
}

fn run(inst: &Instance, start: Option<&Allocation>, opts: &SolveOptions, who: Algorithm) -> Result<Solution> {
    let mode = mode(inst, who)?;
    let p = pad(inst, who)?;
    let mut x = match start {
        Some(s) => {
            require_feasible(s, inst)?;
            pad_allocation(&p, s)
        }
        None => max_weight_swm(&p.inst)?,
    };
    let mut stats = RunStats::default();
    let welfare = x.welfare(&p.inst);
    let m = p.inst.num_items();
    let limit = m * m * m + 16;
    loop {
        let phi = potential(&p.inst, &x)?;
        if opts.verify && mode == Mode::Binary {
            if let Some(prev) = stats.potential.last() {
                let prev = *prev;
                invariant(phi < prev, &mut stats, || format!("potential did not drop: {prev} -> {phi}"))?;
            }
            invariant(x.welfare(&p.inst) == welfare, &mut stats, || "welfare changed during a swap".into())?;
        }
        stats.potential.push(phi);
        if step(&p, &mut x, mode, &mut stats, opts.verify)?.is_none() {
            break;
        }
        stats.iterations += 1;
        if stats.iterations > limit {
            return Err(Error::Internal(format!("no EF1 allocation after {limit} swaps")));
        }
    }
    if opts.verify && mode == Mode::Binary && start.is_none() {
        let iterations = stats.iterations;
        invariant(iterations <= p.original.max(1), &mut stats, || {
            format!("{iterations} swaps exceed the item count {}", p.original)
        })?;
    }
    let guarantee = match mode {
        Mode::Binary => Guarantee::Ef1MaxWelfare,
        Mode::Identical => Guarantee::Ef1Pareto,
    };
    Ok(Solution { allocation: x.truncated(p.original), algorithm: who, guarantee, stats })
}

/// Starts from a welfare-maximizing allocation and swaps item pairs along
/// feasible-exchange bijections until the allocation is EF1.
///
/// Works for identical valuations (any number of agents) and for binary
/// valuations with at most three agents. Fails with
/// [`Error::NotBaseOrderable`] when two bundles have no exchange bijection.
pub fn iterated_swaps(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    run(inst, None, opts, Algorithm::IteratedSwaps)
}

/// [`iterated_swaps`] from a given complete feasible allocation.
pub fn iterated_swaps_from(inst: &Instance, start: &Allocation, opts: &SolveOptions) -> Result<Solution> {
    run(inst, Some(start), opts, Algorithm::IteratedSwaps)
}

/// Two agents: split into two bundles that are EF1 under the first agent's
/// valuation, let the second agent take its favourite, give the other to the first.
pub fn cut_and_choose(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    let who = Algorithm::CutAndChoose;
    if inst.num_agents() != 2 {
        return refuse(who, "exactly two agents");
    }
    if inst.shared_matroid().is_none() {
        return refuse(who, "the same matroid constraint for both agents");
    }
    let v1 = inst.valuations()[0].clone();
    let virtual_inst = inst.with_valuations(vec![v1.clone(), v1])?;
    let split = run(&virtual_inst, None, opts, who)?;
    let b = split.allocation.bundles();
    let (v0, v1) = (inst.value(1, &b[0]), inst.value(1, &b[1]));
    let smallest = |s: &[Item]| s.first().copied().unwrap_or(usize::MAX);
    let chooser_takes_first = v0 > v1 || (v0 == v1 && smallest(&b[0]) <= smallest(&b[1]));
    let allocation = if chooser_takes_first {
        Allocation::new(vec![b[1].clone(), b[0].clone()])
    } else {
        Allocation::new(vec![b[0].clone(), b[1].clone()])
    };
    let mut stats = split.stats;
    if opts.verify {
        let e = envy_matrix_partial(&allocation, inst)?[1][0];
        invariant(e.is_zero(), &mut stats, || format!("chooser has positive envy {e}"))?;
    }
    Ok(Solution { allocation, algorithm: who, guarantee: Guarantee::Ef1CutAndChoose, stats })
}
