//! Matroids given by independence oracles.
//!
//! Every algorithm in the crate talks to a constraint only through
//! [`Matroid::is_independent`], so user-defined oracles plug in through
//! [`IndependenceOracle`]. The built-in kinds are declared with
//! [`MatroidSpec`], which is also the on-disk form.

mod exchange;
pub mod kinds;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{capability, input, Error, Result};
use crate::model::Item;

pub use exchange::BASE_ORDER_GUARD;

/// Largest ground set on which the matroid axioms are checked exhaustively.
pub const AXIOM_GUARD: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatroidKind {
    Uniform,
    Partition,
    Laminar,
    Transversal,
    Graphic,
    FreeExtension,
    Custom,
}

impl fmt::Display for MatroidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MatroidKind::Uniform => "uniform",
            MatroidKind::Partition => "partition",
            MatroidKind::Laminar => "laminar",
            MatroidKind::Transversal => "transversal",
            MatroidKind::Graphic => "graphic",
            MatroidKind::FreeExtension => "free_extension",
            MatroidKind::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Independence oracle over the ground set `0..ground_size()`.
///
/// `is_independent` receives distinct, in-range item ids in any order.
/// Implementations must be immutable during queries.
pub trait IndependenceOracle: fmt::Debug + Send + Sync {
    fn ground_size(&self) -> usize;
    fn is_independent(&self, set: &[Item]) -> bool;
    fn kind(&self) -> MatroidKind {
        MatroidKind::Custom
    }
}

/// Declarative description of the built-in matroid kinds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatroidSpec {
    Uniform {
        capacity: usize,
    },
    Partition {
        categories: Vec<Vec<Item>>,
        capacities: Vec<usize>,
    },
    Laminar {
        sets: Vec<Vec<Item>>,
        capacities: Vec<usize>,
    },
    /// `adjacency[g]` lists the right-hand vertices item `g` may be matched to.
    Transversal {
        adjacency: Vec<Vec<usize>>,
    },
    /// Ground set is the edge list, in order.
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    FreeExtension {
        base: Box<MatroidSpec>,
        count: usize,
    },
    /// Independent sets are the subsets of the listed maximal sets.
    Custom {
        maximal: Vec<Vec<Item>>,
    },
}

impl MatroidSpec {
    pub fn kind(&self) -> MatroidKind {
        match self {
            MatroidSpec::Uniform { .. } => MatroidKind::Uniform,
            MatroidSpec::Partition { .. } => MatroidKind::Partition,
            MatroidSpec::Laminar { .. } => MatroidKind::Laminar,
            MatroidSpec::Transversal { .. } => MatroidKind::Transversal,
            MatroidSpec::Graphic { .. } => MatroidKind::Graphic,
            MatroidSpec::FreeExtension { .. } => MatroidKind::FreeExtension,
            MatroidSpec::Custom { .. } => MatroidKind::Custom,
        }
    }

    /// Normal form used to decide whether two specs describe the same matroid.
    fn canonical(&self, ground: usize) -> MatroidSpec {
        fn sorted_sets(sets: &[Vec<Item>], caps: &[usize]) -> (Vec<Vec<Item>>, Vec<usize>) {
            let mut pairs: Vec<(Vec<Item>, usize)> = sets
                .iter()
                .zip(caps)
                .filter(|(s, _)| !s.is_empty())
                .map(|(s, &c)| {
                    let mut s = s.clone();
                    s.sort_unstable();
                    let c = c.min(s.len());
                    (s, c)
                })
                .collect();
            pairs.sort();
            pairs.into_iter().unzip()
        }
        match self {
            MatroidSpec::Uniform { capacity } => {
                let (categories, capacities) =
                    sorted_sets(&[(0..ground).collect()], &[*capacity]);
                MatroidSpec::Partition { categories, capacities }
            }
            MatroidSpec::Partition { categories, capacities } => {
                let (categories, capacities) = sorted_sets(categories, capacities);
                MatroidSpec::Partition { categories, capacities }
            }
            MatroidSpec::Laminar { sets, capacities } => {
                let (sets, capacities) = sorted_sets(sets, capacities);
                MatroidSpec::Laminar { sets, capacities }
            }
            MatroidSpec::Custom { maximal } => {
                let mut maximal: Vec<Vec<Item>> = maximal
                    .iter()
                    .map(|s| {
                        let mut s = s.clone();
                        s.sort_unstable();
                        s
                    })
                    .collect();
                maximal.sort();
                maximal.dedup();
                MatroidSpec::Custom { maximal }
            }
            other => other.clone(),
        }
    }
}

/// Categories and capacities of a partition matroid, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionView {
    pub categories: Vec<Vec<Item>>,
    pub capacities: Vec<usize>,
}

/// Shared handle to an independence oracle.
#[derive(Clone)]
pub struct Matroid {
    oracle: Arc<dyn IndependenceOracle>,
    spec: Option<Arc<MatroidSpec>>,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.spec {
            Some(spec) => write!(f, "Matroid({:?})", spec),
            None => write!(f, "Matroid({:?})", self.oracle),
        }
    }
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.oracle, &other.oracle) {
            return true;
        }
        let n = self.ground_size();
        match (&self.spec, &other.spec) {
            (Some(a), Some(b)) => n == other.ground_size() && a.canonical(n) == b.canonical(n),
            _ => false,
        }
    }
}

fn check_items(sets: &[Vec<Item>], ground: usize, what: &str) -> Result<()> {
    for s in sets {
        for &g in s {
            if g >= ground {
                return input(format!("{what}: item {g} outside ground set of size {ground}"));
            }
        }
    }
    Ok(())
}

fn membership(sets: &[Vec<Item>], ground: usize) -> Vec<Vec<bool>> {
    sets.iter()
        .map(|s| {
            let mut m = vec![false; ground];
            for &g in s {
                m[g] = true;
            }
            m
        })
        .collect()
}

impl Matroid {
    /// Wraps a user-supplied oracle.
    pub fn from_oracle(oracle: impl IndependenceOracle + 'static) -> Self {
        Matroid { oracle: Arc::new(oracle), spec: None }
    }

    pub fn uniform(ground: usize, capacity: usize) -> Self {
        Self::from_spec(&MatroidSpec::Uniform { capacity }, ground).expect("uniform spec is always valid")
    }

    pub fn partition(categories: Vec<Vec<Item>>, capacities: Vec<usize>) -> Result<Self> {
        let ground = categories.iter().map(Vec::len).sum();
        Self::from_spec(&MatroidSpec::Partition { categories, capacities }, ground)
    }

    pub fn graphic(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let ground = edges.len();
        Self::from_spec(&MatroidSpec::Graphic { vertices, edges }, ground)
    }

    /// Builds and validates a matroid over `0..ground`.
    pub fn from_spec(spec: &MatroidSpec, ground: usize) -> Result<Self> {
        let oracle: Arc<dyn IndependenceOracle> = match spec {
            MatroidSpec::Uniform { capacity } => Arc::new(kinds::Uniform { ground, capacity: *capacity }),
            MatroidSpec::Partition { categories, capacities } => {
                if categories.len() != capacities.len() {
                    return input(format!(
                        "partition: {} categories but {} capacities",
                        categories.len(),
                        capacities.len()
                    ));
                }
                check_items(categories, ground, "partition")?;
                let mut category_of = vec![usize::MAX; ground];
                for (h, cat) in categories.iter().enumerate() {
                    for &g in cat {
                        if category_of[g] != usize::MAX {
                            return input(format!("partition: item {g} appears in more than one category"));
                        }
                        category_of[g] = h;
                    }
                }
                if let Some(g) = category_of.iter().position(|&c| c == usize::MAX) {
                    return input(format!("partition: item {g} is in no category"));
                }
                Arc::new(kinds::Partition { category_of, capacities: capacities.clone() })
            }
            MatroidSpec::Laminar { sets, capacities } => {
                if sets.len() != capacities.len() {
                    return input(format!("laminar: {} sets but {} capacities", sets.len(), capacities.len()));
                }
                check_items(sets, ground, "laminar")?;
                let member = membership(sets, ground);
                for (a, ma) in member.iter().enumerate() {
                    for mb in &member[a + 1..] {
                        let inter = (0..ground).any(|g| ma[g] && mb[g]);
                        let a_in_b = (0..ground).all(|g| !ma[g] || mb[g]);
                        let b_in_a = (0..ground).all(|g| !mb[g] || ma[g]);
                        if inter && !a_in_b && !b_in_a {
                            return input("laminar: two sets overlap without nesting");
                        }
                    }
                }
                if let Some(g) = (0..ground).find(|&g| !member.iter().any(|m| m[g])) {
                    return input(format!("laminar: item {g} is covered by no set"));
                }
                Arc::new(kinds::Laminar { ground, member, capacities: capacities.clone() })
            }
            MatroidSpec::Transversal { adjacency } => {
                if adjacency.len() != ground {
                    return input(format!(
                        "transversal: adjacency has {} rows for {} items",
                        adjacency.len(),
                        ground
                    ));
                }
                let right = adjacency.iter().flatten().map(|&r| r + 1).max().unwrap_or(0);
                let adjacency = adjacency
                    .iter()
                    .map(|row| {
                        let mut row = row.clone();
                        row.sort_unstable();
                        row.dedup();
                        row
                    })
                    .collect();
                Arc::new(kinds::Transversal { adjacency, right })
            }
            MatroidSpec::Graphic { vertices, edges } => {
                if edges.len() != ground {
                    return input(format!("graphic: {} edges for {} items", edges.len(), ground));
                }
                if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= *vertices || v >= *vertices) {
                    return input(format!("graphic: edge ({u},{v}) references a vertex >= {vertices}"));
                }
                Arc::new(kinds::Graphic { vertices: *vertices, edges: edges.clone() })
            }
            MatroidSpec::FreeExtension { base, count } => {
                if *count > ground {
                    return input("free_extension: more new items than the ground set holds");
                }
                let base = Matroid::from_spec(base, ground - count)?;
                let rank = base.full_rank();
                Arc::new(kinds::FreeExtension { base, rank, count: *count })
            }
            MatroidSpec::Custom { maximal } => {
                check_items(maximal, ground, "custom")?;
                let m = Arc::new(kinds::Custom { ground, member: membership(maximal, ground) });
                let matroid = Matroid { oracle: m.clone(), spec: None };
                if ground <= AXIOM_GUARD {
                    matroid.check_axioms().map_err(|e| Error::Input(format!("custom: {e}")))?;
                }
                m
            }
        };
        Ok(Matroid { oracle, spec: Some(Arc::new(spec.clone())) })
    }

    pub fn ground_size(&self) -> usize {
        self.oracle.ground_size()
    }

    pub fn kind(&self) -> MatroidKind {
        self.oracle.kind()
    }

    pub fn spec(&self) -> Option<&MatroidSpec> {
        self.spec.as_deref()
    }

    /// Raw oracle query; `set` must hold distinct in-range ids.
    pub fn is_independent(&self, set: &[Item]) -> bool {
        self.oracle.is_independent(set)
    }

    /// Validates ids and returns the set sorted and deduplicated-checked.
    pub fn checked_set(&self, set: &[Item]) -> Result<Vec<Item>> {
        let n = self.ground_size();
        let mut s = set.to_vec();
        s.sort_unstable();
        if let Some(&g) = s.iter().find(|&&g| g >= n) {
            return input(format!("unknown item {g} (ground set has {n} items)"));
        }
        if s.windows(2).any(|w| w[0] == w[1]) {
            return input("set contains a repeated item");
        }
        Ok(s)
    }

    /// Categories and capacities when this is a uniform or partition matroid.
    pub fn partition_view(&self) -> Option<PartitionView> {
        match self.spec.as_deref()? {
            MatroidSpec::Uniform { capacity } => Some(PartitionView {
                categories: vec![(0..self.ground_size()).collect()],
                capacities: vec![*capacity],
            }),
            MatroidSpec::Partition { categories, capacities } => Some(PartitionView {
                categories: categories
                    .iter()
                    .map(|c| {
                        let mut c = c.clone();
                        c.sort_unstable();
                        c
                    })
                    .collect(),
                capacities: capacities.clone(),
            }),
            _ => None,
        }
    }

    /// Greedy maximal independent subset of `items`, scanning in the given order.
    pub fn greedy_independent(&self, items: impl IntoIterator<Item = Item>) -> Vec<Item> {
        let mut acc = Vec::new();
        for g in items {
            acc.push(g);
            if !self.is_independent(&acc) {
                acc.pop();
            }
        }
        acc
    }

    /// Size of a maximal independent subset of `set`.
    pub fn rank(&self, set: &[Item]) -> Result<usize> {
        let s = self.checked_set(set)?;
        Ok(self.greedy_independent(s).len())
    }

    /// Rank of the whole ground set.
    pub fn full_rank(&self) -> usize {
        self.greedy_independent(0..self.ground_size()).len()
    }

    /// Some `g` in `t \ s` with `s + g` independent, lowest id first.
    pub fn augment(&self, s: &[Item], t: &[Item]) -> Result<Item> {
        let s = self.checked_set(s)?;
        let t = self.checked_set(t)?;
        if !self.is_independent(&s) || !self.is_independent(&t) {
            return input("augment: both sets must be independent");
        }
        if s.len() >= t.len() {
            return input("augment: first set must be strictly smaller than the second");
        }
        let mut probe = s.clone();
        for &g in &t {
            if s.binary_search(&g).is_ok() {
                continue;
            }
            probe.push(g);
            if self.is_independent(&probe) {
                return Ok(g);
            }
            probe.pop();
        }
        Err(Error::Internal(
            "augmentation property fails: the oracle is not a matroid".into(),
        ))
    }

    /// Iterated free extension by `count` new items numbered after the ground set.
    pub fn free_extend(&self, count: usize) -> Matroid {
        if count == 0 {
            return self.clone();
        }
        let rank = self.full_rank();
        let spec = self
            .spec
            .as_ref()
            .map(|s| Arc::new(MatroidSpec::FreeExtension { base: Box::new((**s).clone()), count }));
        Matroid {
            oracle: Arc::new(kinds::FreeExtension { base: self.clone(), rank, count }),
            spec,
        }
    }

    fn independence_table(&self) -> Vec<bool> {
        let n = self.ground_size();
        (0u32..1 << n).map(|mask| self.is_independent(&mask_items(mask))).collect()
    }

    /// Exhaustive check of the matroid axioms on ground sets of at most [`AXIOM_GUARD`] items.
    pub fn check_axioms(&self) -> Result<(), String> {
        let n = self.ground_size();
        if n > AXIOM_GUARD {
            return Err(format!("ground set of {n} items exceeds the axiom-check guard {AXIOM_GUARD}"));
        }
        let ind = self.independence_table();
        if !ind[0] {
            return Err("the empty set is not independent".into());
        }
        for mask in 0u32..1 << n {
            if !ind[mask as usize] {
                continue;
            }
            for g in 0..n {
                if mask >> g & 1 == 1 && !ind[(mask & !(1 << g)) as usize] {
                    return Err(format!("not downward-closed: {:?} independent", mask_items(mask)));
                }
            }
        }
        let indep: Vec<u32> = (0u32..1 << n).filter(|&m| ind[m as usize]).collect();
        for &s in &indep {
            for &t in &indep {
                if s.count_ones() >= t.count_ones() {
                    continue;
                }
                let extendable = (0..n).any(|g| t >> g & 1 == 1 && s >> g & 1 == 0 && ind[(s | 1 << g) as usize]);
                if !extendable {
                    return Err(format!(
                        "augmentation fails for {:?} and {:?}",
                        mask_items(s),
                        mask_items(t)
                    ));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn guard(&self, limit: usize, what: &str) -> Result<()> {
        let n = self.ground_size();
        if n > limit {
            return capability(format!("{what}: ground set of {n} items exceeds the guard of {limit}"));
        }
        Ok(())
    }
}

pub(crate) fn mask_items(mask: u32) -> Vec<Item> {
    (0..32).filter(|&g| mask >> g & 1 == 1).collect()
}

#[cfg(test)]
mod tests;
