//! Capped round robin within one category, and the two-agent surplus.

use num_traits::Zero;

use crate::error::{input, Result};
use crate::model::{Agent, Item};
use crate::value::Value;

/// Round robin over `items` in the order `sigma`: an agent whose capacity is
/// used up is skipped, every other picker takes its most valuable remaining
/// item (lowest id on ties).
///
/// `capacities` and `valuations` are indexed by agent; the result holds one
/// sorted bundle per agent.
pub fn capped_round_robin(
    items: &[Item],
    capacities: &[usize],
    valuations: &[Vec<Value>],
    sigma: &[Agent],
) -> Result<Vec<Vec<Item>>> {
    let n = capacities.len();
    super::validate_order(sigma, n)?;
    let room: usize = capacities.iter().map(|&c| c.min(items.len())).sum();
    if room < items.len() {
        return input(format!(
            "capacities sum to {room} but the category has {} items",
            items.len()
        ));
    }
    let mut remaining: Vec<Item> = items.to_vec();
    remaining.sort_unstable();
    let mut bundles: Vec<Vec<Item>> = vec![Vec::new(); n];
    while !remaining.is_empty() {
        for &a in sigma {
            if remaining.is_empty() {
                break;
            }
            if bundles[a].len() >= capacities[a] {
                continue;
            }
            let v = &valuations[a];
            let mut best = 0;
            for k in 1..remaining.len() {
                if v[remaining[k]] > v[remaining[best]] {
                    best = k;
                }
            }
            bundles[a].push(remaining.remove(best));
        }
    }
    for b in &mut bundles {
        b.sort_unstable();
    }
    Ok(bundles)
}

/// Two-agent capped round robin with `leader` picking first.
pub fn crr_two_agents(
    items: &[Item],
    capacities: [usize; 2],
    valuations: [&[Value]; 2],
    leader: Agent,
) -> Result<[Vec<Item>; 2]> {
    let vals = vec![valuations[0].to_vec(), valuations[1].to_vec()];
    let sigma = if leader == 0 { [0, 1] } else { [1, 0] };
    let mut b = capped_round_robin(items, &capacities, &vals, &sigma)?;
    let second = b.pop().expect("two bundles");
    let first = b.pop().expect("two bundles");
    Ok([first, second])
}

/// Value of the best `capacity` items of `bundle` (feasible value within one category).
pub fn category_value(values: &[Value], capacity: usize, bundle: &[Item]) -> Value {
    let mut vs: Vec<Value> = bundle.iter().map(|&g| values[g]).collect();
    vs.sort_unstable_by(|a, b| b.cmp(a));
    vs.into_iter().take(capacity).fold(Value::zero(), |acc, v| acc + v)
}

/// `F_i(own) - F_i(other)` within one category.
pub fn surplus(values: &[Value], capacity: usize, own: &[Item], other: &[Item]) -> Value {
    category_value(values, capacity, own) - category_value(values, capacity, other)
}
