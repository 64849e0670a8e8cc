//! Maximum-weight common independent sets of two matroids, by successive
//! shortest augmenting paths in the exchange graph.

use std::ops::{Add, Neg};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{Agent, Allocation, Instance, Item};
use crate::value::{self, Value};

/// Two matroids over a common ground set `0..ground_size()`.
pub trait MatroidPair {
    fn ground_size(&self) -> usize;
    fn independent_first(&self, set: &[usize]) -> bool;
    fn independent_second(&self, set: &[usize]) -> bool;

    /// Is `current - out + add` independent in the first matroid.
    fn exchange_first(&self, current: &[usize], out: Option<usize>, add: usize) -> bool {
        self.independent_first(&exchanged(current, out, add))
    }

    fn exchange_second(&self, current: &[usize], out: Option<usize>, add: usize) -> bool {
        self.independent_second(&exchanged(current, out, add))
    }
}

fn exchanged(current: &[usize], out: Option<usize>, add: usize) -> Vec<usize> {
    let mut s: Vec<usize> = current.iter().copied().filter(|&e| Some(e) != out).collect();
    s.push(add);
    s.sort_unstable();
    s
}

/// Path cost bound for the shortest-path pass.
pub trait Weight: Clone + Ord + Zero + Add<Output = Self> + Neg<Output = Self> {}
impl<T: Clone + Ord + Zero + Add<Output = T> + Neg<Output = T>> Weight for T {}

/// Maximum-weight common independent set; among those, the largest one found.
///
/// Each round augments along a minimum-cost path (costs `-w` on entering
/// elements, `+w` on leaving ones), preferring fewer arcs and then lower ids.
/// The set after `k` rounds has maximum weight among common independent sets
/// of size `k`.
pub fn max_weight_common_independent<W: Weight>(p: &impl MatroidPair, weights: &[W]) -> Vec<usize> {
    let n = p.ground_size();
    assert_eq!(weights.len(), n);
    let mut in_set = vec![false; n];
    let mut best: Vec<usize> = Vec::new();
    let mut best_weight = W::zero();
    loop {
        let current: Vec<usize> = (0..n).filter(|&e| in_set[e]).collect();
        let Some(path) = shortest_augmenting_path(p, weights, &current, &in_set) else {
            break;
        };
        for e in path {
            in_set[e] = !in_set[e];
        }
        let set: Vec<usize> = (0..n).filter(|&e| in_set[e]).collect();
        let w = set.iter().fold(W::zero(), |acc, &e| acc + weights[e].clone());
        if w >= best_weight {
            best_weight = w;
            best = set;
        }
    }
    best
}

fn shortest_augmenting_path<W: Weight>(
    p: &impl MatroidPair,
    weights: &[W],
    current: &[usize],
    in_set: &[bool],
) -> Option<Vec<usize>> {
    let n = in_set.len();
    let outside: Vec<usize> = (0..n).filter(|&e| !in_set[e]).collect();
    let cost = |e: usize| if in_set[e] { weights[e].clone() } else { -weights[e].clone() };

    // adjacency of the exchange graph
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &y in current {
        for &x in &outside {
            if p.exchange_first(current, Some(y), x) {
                succ[y].push(x);
            }
            if p.exchange_second(current, Some(y), x) {
                succ[x].push(y);
            }
        }
    }
    let sinks: Vec<bool> = (0..n).map(|e| !in_set[e] && p.exchange_second(current, None, e)).collect();

    let mut dist: Vec<Option<(W, usize)>> = vec![None; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    for &x in &outside {
        if p.exchange_first(current, None, x) {
            dist[x] = Some((cost(x), 0));
        }
    }
    for _ in 0..n {
        let mut changed = false;
        for u in 0..n {
            let Some((du, au)) = dist[u].clone() else { continue };
            for &v in &succ[u] {
                let cand = (du.clone() + cost(v), au + 1);
                if dist[v].as_ref().is_none_or(|d| cand < *d) {
                    dist[v] = Some(cand);
                    pred[v] = Some(u);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let end = (0..n)
        .filter(|&e| sinks[e] && dist[e].is_some())
        .min_by(|&a, &b| dist[a].cmp(&dist[b]).then(a.cmp(&b)))?;
    let mut path = vec![end];
    let mut at = end;
    while let Some(prev) = pred[at] {
        path.push(prev);
        at = prev;
        if path.len() > n + 1 {
            unreachable!("exchange graph has a negative cycle");
        }
    }
    Some(path)
}

/// Agent-item pairs `(i, g)` encoded as `i * m + g`: the first matroid is the
/// direct sum of the agents' constraint matroids, the second lets each item
/// be taken once.
#[derive(Debug)]
pub struct IntersectionProblem<'a> {
    inst: &'a Instance,
}

impl<'a> IntersectionProblem<'a> {
    pub fn new(inst: &'a Instance) -> Result<Self> {
        if !inst.all_matroids() {
            return Err(Error::Capability(
                "welfare maximization by matroid intersection needs matroid constraints".into(),
            ));
        }
        Ok(IntersectionProblem { inst })
    }

    pub fn element(&self, agent: Agent, item: Item) -> usize {
        agent * self.inst.num_items() + item
    }

    pub fn pair(&self, e: usize) -> (Agent, Item) {
        let m = self.inst.num_items();
        (e / m, e % m)
    }

    fn bundle_of(&self, set: &[usize], agent: Agent) -> Vec<Item> {
        set.iter().map(|&e| self.pair(e)).filter(|&(i, _)| i == agent).map(|(_, g)| g).collect()
    }

    fn bundle_ok(&self, agent: Agent, bundle: &[Item]) -> bool {
        let mut b = bundle.to_vec();
        b.sort_unstable();
        self.inst.is_feasible_for(agent, &b)
    }

    /// Weights `V + v_i(g)` with `V = m * max value` (1 when all values are 0).
    pub fn weights(&self) -> Vec<Value> {
        let m = self.inst.num_items();
        let vmax = self.inst.valuations().iter().flatten().max().copied().unwrap_or_else(Value::zero);
        let big = if vmax.is_zero() { value::int(1) } else { vmax * value::int(m as i64) };
        self.inst.valuations().iter().flat_map(|row| row.iter().map(move |v| big + v)).collect()
    }

    pub fn to_allocation(&self, set: &[usize]) -> Allocation {
        let mut x = Allocation::empty(self.inst.num_agents());
        for &e in set {
            let (i, g) = self.pair(e);
            x.give(i, g);
        }
        x
    }
}

impl MatroidPair for IntersectionProblem<'_> {
    fn ground_size(&self) -> usize {
        self.inst.num_agents() * self.inst.num_items()
    }

    fn independent_first(&self, set: &[usize]) -> bool {
        self.inst.agents().all(|i| self.bundle_ok(i, &self.bundle_of(set, i)))
    }

    fn independent_second(&self, set: &[usize]) -> bool {
        let mut taken = vec![false; self.inst.num_items()];
        set.iter().all(|&e| !std::mem::replace(&mut taken[self.pair(e).1], true))
    }

    fn exchange_first(&self, current: &[usize], out: Option<usize>, add: usize) -> bool {
        let (agent, _) = self.pair(add);
        let mut bundle: Vec<Item> = current
            .iter()
            .filter(|&&e| Some(e) != out)
            .map(|&e| self.pair(e))
            .filter(|&(i, _)| i == agent)
            .map(|(_, g)| g)
            .collect();
        bundle.push(self.pair(add).1);
        self.bundle_ok(agent, &bundle)
    }

    fn exchange_second(&self, current: &[usize], out: Option<usize>, add: usize) -> bool {
        let item = self.pair(add).1;
        current.iter().all(|&e| Some(e) == out || self.pair(e).1 != item)
    }
}

/// Integer weights when all denominators share a small common multiple.
fn scaled_weights(ws: &[Value]) -> Option<Vec<i128>> {
    let mut l: i64 = 1;
    for w in ws {
        l = l.lcm(w.denom());
        if l > 1 << 40 {
            return None;
        }
    }
    ws.iter()
        .map(|w| (i128::from(*w.numer())).checked_mul(i128::from(l / w.denom())))
        .collect()
}

/// Complete feasible allocation maximizing total value, for matroid constraints.
pub fn max_weight_swm(inst: &Instance) -> Result<Allocation> {
    let problem = IntersectionProblem::new(inst)?;
    let w = problem.weights();
    let set = match scaled_weights(&w) {
        Some(ints) => max_weight_common_independent(&problem, &ints),
        None => {
            let big: Vec<BigRational> = w.iter().map(value::to_big).collect();
            max_weight_common_independent(&problem, &big)
        }
    };
    let x = problem.to_allocation(&set);
    if x.num_allocated() < inst.num_items() {
        return Err(Error::Infeasible(format!(
            "at most {} of {} items can be allocated feasibly",
            x.num_allocated(),
            inst.num_items()
        )));
    }
    Ok(x)
}
