//! Downward-closed set systems that are not matroids, and the
//! complementary-items detector that certifies EF1 nonexistence.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{capability, input, Result};
use crate::matroid::{Matroid, MatroidSpec};
use crate::model::{Constraint, Instance, Item};
use crate::value::{self, serde_value, serde_values, Value};

/// Largest ground set on which two-sided partitions are enumerated.
pub const PARTITION_GUARD: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetSystemKind {
    Budget,
    ConflictGraph,
    MatroidIntersection,
    BipartiteMatching,
    Matroid,
    Custom,
}

impl fmt::Display for SetSystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SetSystemKind::Budget => "budget",
            SetSystemKind::ConflictGraph => "conflict_graph",
            SetSystemKind::MatroidIntersection => "matroid_intersection",
            SetSystemKind::BipartiteMatching => "bipartite_matching",
            SetSystemKind::Matroid => "matroid",
            SetSystemKind::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Feasibility oracle for a user-defined set system.
pub trait FeasibilityOracle: fmt::Debug + Send + Sync {
    fn ground_size(&self) -> usize;
    fn is_feasible(&self, set: &[Item]) -> bool;
    /// Only downward-closed systems allow pruning during enumeration.
    fn is_downward_closed(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSystemSpec {
    /// Feasible iff total cost is at most the budget.
    Budget {
        #[serde(with = "serde_values")]
        costs: Vec<Value>,
        #[serde(with = "serde_value")]
        budget: Value,
    },
    /// Items are vertices; feasible sets contain no conflict edge.
    ConflictGraph { edges: Vec<(Item, Item)> },
    /// Independent in both matroids.
    Intersection { first: MatroidSpec, second: MatroidSpec },
    /// Item `g` is the edge `edges[g] = (left, right)`; feasible sets are matchings.
    BipartiteMatching { edges: Vec<(usize, usize)> },
}

#[derive(Debug)]
enum Backing {
    Budget { costs: Vec<Value>, budget: Value },
    Conflict { ground: usize, adjacent: Vec<Vec<bool>> },
    Intersection(Matroid, Matroid),
    Matching { edges: Vec<(usize, usize)> },
    Matroid(Matroid),
    Custom(Arc<dyn FeasibilityOracle>),
}

/// Query-only constraint; algorithms that need matroid structure refuse it.
#[derive(Debug, Clone)]
pub struct SetSystem {
    backing: Arc<Backing>,
    spec: Option<SetSystemSpec>,
}

impl PartialEq for SetSystem {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.backing, &other.backing) {
            return true;
        }
        match (&self.spec, &other.spec) {
            (Some(a), Some(b)) => a == b,
            _ => match (&*self.backing, &*other.backing) {
                (Backing::Matroid(a), Backing::Matroid(b)) => a == b,
                _ => false,
            },
        }
    }
}

impl SetSystem {
    pub fn from_spec(spec: &SetSystemSpec, ground: usize) -> Result<Self> {
        let backing = match spec {
            SetSystemSpec::Budget { costs, budget } => {
                if costs.len() != ground {
                    return input(format!("budget: {} costs for {} items", costs.len(), ground));
                }
                Backing::Budget { costs: costs.clone(), budget: *budget }
            }
            SetSystemSpec::ConflictGraph { edges } => {
                let mut adjacent = vec![vec![false; ground]; ground];
                for &(u, v) in edges {
                    if u >= ground || v >= ground {
                        return input(format!("conflict_graph: edge ({u},{v}) references an unknown item"));
                    }
                    adjacent[u][v] = true;
                    adjacent[v][u] = true;
                }
                Backing::Conflict { ground, adjacent }
            }
            SetSystemSpec::Intersection { first, second } => {
                Backing::Intersection(Matroid::from_spec(first, ground)?, Matroid::from_spec(second, ground)?)
            }
            SetSystemSpec::BipartiteMatching { edges } => {
                if edges.len() != ground {
                    return input(format!("bipartite_matching: {} edges for {} items", edges.len(), ground));
                }
                Backing::Matching { edges: edges.clone() }
            }
        };
        Ok(SetSystem { backing: Arc::new(backing), spec: Some(spec.clone()) })
    }

    pub fn budget(costs: Vec<Value>, budget: Value) -> Self {
        let n = costs.len();
        Self::from_spec(&SetSystemSpec::Budget { costs, budget }, n).expect("valid budget")
    }

    pub fn conflict_graph(items: usize, edges: Vec<(Item, Item)>) -> Result<Self> {
        Self::from_spec(&SetSystemSpec::ConflictGraph { edges }, items)
    }

    pub fn bipartite_matching(edges: Vec<(usize, usize)>) -> Self {
        let n = edges.len();
        Self::from_spec(&SetSystemSpec::BipartiteMatching { edges }, n).expect("valid matching system")
    }

    pub fn intersection(first: Matroid, second: Matroid) -> Result<Self> {
        if first.ground_size() != second.ground_size() {
            return input("intersection: matroids have different ground sets");
        }
        let spec = match (first.spec(), second.spec()) {
            (Some(a), Some(b)) => Some(SetSystemSpec::Intersection { first: a.clone(), second: b.clone() }),
            _ => None,
        };
        Ok(SetSystem { backing: Arc::new(Backing::Intersection(first, second)), spec })
    }

    /// Views a matroid as a set system.
    pub fn from_matroid(m: Matroid) -> Self {
        SetSystem { backing: Arc::new(Backing::Matroid(m)), spec: None }
    }

    pub fn from_oracle(oracle: impl FeasibilityOracle + 'static) -> Self {
        SetSystem { backing: Arc::new(Backing::Custom(Arc::new(oracle))), spec: None }
    }

    pub fn spec(&self) -> Option<&SetSystemSpec> {
        self.spec.as_ref()
    }

    pub fn kind(&self) -> SetSystemKind {
        match &*self.backing {
            Backing::Budget { .. } => SetSystemKind::Budget,
            Backing::Conflict { .. } => SetSystemKind::ConflictGraph,
            Backing::Intersection(..) => SetSystemKind::MatroidIntersection,
            Backing::Matching { .. } => SetSystemKind::BipartiteMatching,
            Backing::Matroid(_) => SetSystemKind::Matroid,
            Backing::Custom(_) => SetSystemKind::Custom,
        }
    }

    pub fn ground_size(&self) -> usize {
        match &*self.backing {
            Backing::Budget { costs, .. } => costs.len(),
            Backing::Conflict { ground, .. } => *ground,
            Backing::Intersection(a, _) => a.ground_size(),
            Backing::Matching { edges } => edges.len(),
            Backing::Matroid(m) => m.ground_size(),
            Backing::Custom(o) => o.ground_size(),
        }
    }

    pub fn is_feasible(&self, set: &[Item]) -> bool {
        match &*self.backing {
            Backing::Budget { costs, budget } => value::sum(set.iter().map(|&g| &costs[g])) <= *budget,
            Backing::Conflict { adjacent, .. } => set
                .iter()
                .enumerate()
                .all(|(a, &u)| set[a + 1..].iter().all(|&v| !adjacent[u][v])),
            Backing::Intersection(a, b) => a.is_independent(set) && b.is_independent(set),
            Backing::Matching { edges } => set.iter().enumerate().all(|(a, &e)| {
                set[a + 1..]
                    .iter()
                    .all(|&f| edges[e].0 != edges[f].0 && edges[e].1 != edges[f].1)
            }),
            Backing::Matroid(m) => m.is_independent(set),
            Backing::Custom(o) => o.is_feasible(set),
        }
    }

    pub fn is_downward_closed(&self) -> bool {
        match &*self.backing {
            Backing::Custom(o) => o.is_downward_closed(),
            _ => true,
        }
    }
}

/// Result of the complementary-items search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Complementarity {
    /// Pairs `(x, y)`, `x < y`, kept together by every feasible two-way partition.
    Pairs(Vec<(Item, Item)>),
    /// No partition of the items into two feasible sets exists.
    NoFeasibleBipartition,
}

impl Complementarity {
    pub fn pairs(&self) -> &[(Item, Item)] {
        match self {
            Complementarity::Pairs(p) => p,
            Complementarity::NoFeasibleBipartition => &[],
        }
    }
}

/// Every feasible partition of the ground set into two sides, as the side
/// holding item 0 (bit mask over items).
pub fn feasible_bipartitions(s: &SetSystem) -> Result<Vec<u32>> {
    let m = s.ground_size();
    if m > PARTITION_GUARD {
        return capability(format!(
            "two-way partitions of {m} items exceed the enumeration guard of {PARTITION_GUARD}"
        ));
    }
    if m == 0 {
        return Ok(if s.is_feasible(&[]) { vec![0] } else { vec![] });
    }
    let full: u32 = if m == 32 { u32::MAX } else { (1 << m) - 1 };
    let mut out = Vec::new();
    let items = |mask: u32| -> Vec<Item> { (0..m).filter(|&g| mask >> g & 1 == 1).collect() };
    for rest in 0u32..1 << (m - 1) {
        let side = 1 | rest << 1;
        if s.is_feasible(&items(side)) && s.is_feasible(&items(full & !side)) {
            out.push(side);
        }
    }
    Ok(out)
}

/// Pairs of items that every feasible two-way partition keeps on the same side.
pub fn complementary_pairs(s: &SetSystem) -> Result<Complementarity> {
    let parts = feasible_bipartitions(s)?;
    if parts.is_empty() {
        return Ok(Complementarity::NoFeasibleBipartition);
    }
    let m = s.ground_size();
    let mut pairs = Vec::new();
    for x in 0..m {
        for y in x + 1..m {
            if parts.iter().all(|&p| (p >> x & 1) == (p >> y & 1)) {
                pairs.push((x, y));
            }
        }
    }
    Ok(Complementarity::Pairs(pairs))
}

/// Two-agent instance with identical constraints `s` in which both agents
/// value the complementary pair at 1 and everything else at 0; no complete
/// feasible allocation of it is EF1.
pub fn no_ef1_witness(s: &SetSystem, pair: (Item, Item)) -> Result<Instance> {
    let (x, y) = if pair.0 <= pair.1 { pair } else { (pair.1, pair.0) };
    match complementary_pairs(s)? {
        Complementarity::Pairs(p) if p.contains(&(x, y)) => {}
        _ => return input(format!("items {x} and {y} are not complementary")),
    }
    let m = s.ground_size();
    let row: Vec<Value> = (0..m)
        .map(|g| Value::from_integer(i64::from(g == x || g == y)))
        .collect();
    Instance::new(vec![row.clone(), row], vec![Constraint::SetSystem(s.clone()); 2])
}
