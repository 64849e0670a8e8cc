//! Seeded random instances, one family per algorithm precondition.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::Algorithm;
use crate::error::{Error, Result};
use crate::matroid::{Matroid, MatroidSpec};
use crate::model::{Constraint, Instance, Item};
use crate::value::{int, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    /// One category, heterogeneous capacities, additive values.
    SingleCategory,
    /// At most two shared categories, heterogeneous capacities.
    TwoCategories,
    /// Identical valuations over shared categories.
    IdenticalValuations,
    /// Binary valuations over shared categories.
    BinaryPartition,
    /// Two agents over shared categories.
    TwoAgentPartition,
    /// Shared categories with the same capacities for everyone.
    IdenticalCapacities,
    /// Three agents, binary valuations, one base-orderable matroid.
    BinaryMatroid,
    /// Identical valuations under one base-orderable matroid.
    IdenticalMatroid,
    /// Two agents, additive valuations, one base-orderable matroid.
    TwoAgentMatroid,
}

impl Setting {
    pub const ALL: [Setting; 9] = [
        Setting::SingleCategory,
        Setting::TwoCategories,
        Setting::IdenticalValuations,
        Setting::BinaryPartition,
        Setting::TwoAgentPartition,
        Setting::IdenticalCapacities,
        Setting::BinaryMatroid,
        Setting::IdenticalMatroid,
        Setting::TwoAgentMatroid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Setting::SingleCategory => "single_category",
            Setting::TwoCategories => "two_categories",
            Setting::IdenticalValuations => "identical_valuations",
            Setting::BinaryPartition => "binary_partition",
            Setting::TwoAgentPartition => "two_agent_partition",
            Setting::IdenticalCapacities => "identical_capacities",
            Setting::BinaryMatroid => "binary_matroid",
            Setting::IdenticalMatroid => "identical_matroid",
            Setting::TwoAgentMatroid => "two_agent_matroid",
        }
    }

    /// The algorithm whose precondition this family satisfies.
    pub fn algorithm(self) -> Algorithm {
        match self {
            Setting::SingleCategory => Algorithm::Crr,
            Setting::TwoCategories => Algorithm::BackAndForthCrr,
            Setting::IdenticalValuations => Algorithm::PerCategoryCrr,
            Setting::BinaryPartition => Algorithm::IteratedPriorityMatching,
            Setting::TwoAgentPartition => Algorithm::RrSquared,
            Setting::IdenticalCapacities => Algorithm::PerCategoryRr,
            Setting::BinaryMatroid | Setting::IdenticalMatroid => Algorithm::IteratedSwaps,
            Setting::TwoAgentMatroid => Algorithm::CutAndChoose,
        }
    }

    pub fn default_shape(self) -> Shape {
        let base = Shape { agents: 2..=5, items: 1..=12, categories: 1..=4, max_value: 6 };
        match self {
            Setting::SingleCategory => Shape { categories: 1..=1, ..base },
            Setting::TwoCategories => Shape { categories: 1..=2, ..base },
            Setting::IdenticalValuations | Setting::IdenticalCapacities => base,
            Setting::BinaryPartition => Shape { max_value: 1, ..base },
            Setting::TwoAgentPartition => Shape { agents: 2..=2, ..base },
            Setting::BinaryMatroid => Shape { agents: 3..=3, items: 1..=10, max_value: 1, ..base },
            Setting::IdenticalMatroid => Shape { agents: 2..=4, items: 1..=10, ..base },
            Setting::TwoAgentMatroid => Shape { agents: 2..=2, items: 1..=10, ..base },
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.replace('-', "_");
        Setting::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Setting::ALL.iter().map(|x| x.name()).collect();
            Error::Input(format!("unknown setting {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

/// Size ranges for generated instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub agents: RangeInclusive<usize>,
    pub items: RangeInclusive<usize>,
    pub categories: RangeInclusive<usize>,
    /// Values are drawn from `0..=max_value`.
    pub max_value: i64,
}

/// Random source for instance `index` of `setting` under `seed`.
pub fn rng_for(setting: Setting, seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (setting as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(index);
    rng
}

pub fn instance(setting: Setting, shape: &Shape, seed: u64, index: u64) -> Instance {
    let mut rng = rng_for(setting, seed, index);
    generate(setting, shape, &mut rng).named(format!("{setting}-{seed}-{index}"))
}

pub fn instances(setting: Setting, shape: &Shape, seed: u64, count: usize) -> Vec<Instance> {
    (0..count as u64).map(|k| instance(setting, shape, seed, k)).collect()
}

/// One instance with a complete feasible allocation.
pub fn generate(setting: Setting, shape: &Shape, rng: &mut impl Rng) -> Instance {
    let n = rng.gen_range(shape.agents.clone());
    let m = rng.gen_range(shape.items.clone());
    let k = rng.gen_range(shape.categories.clone()).clamp(1, m.max(1));
    let rows = |rng: &mut dyn rand::RngCore| -> Vec<Vec<Value>> {
        let identical = matches!(setting, Setting::IdenticalValuations | Setting::IdenticalMatroid);
        let first = values(rng, m, shape.max_value);
        (0..n).map(|i| if identical || i == 0 { first.clone() } else { values(rng, m, shape.max_value) }).collect()
    };
    match setting {
        Setting::BinaryMatroid | Setting::IdenticalMatroid | Setting::TwoAgentMatroid => loop {
            let matroid = base_orderable(rng, n, m, k);
            let inst = Instance::with_shared_matroid(rows(rng), matroid).expect("generated instances are valid");
            if inst.admits_feasible_allocation() == Some(true) {
                return inst;
            }
        },
        _ => {
            let categories = random_categories(rng, m, k);
            let identical = setting == Setting::IdenticalCapacities;
            let caps = capacities(rng, n, &categories, identical);
            let constraints: Vec<Constraint> = caps
                .into_iter()
                .map(|c| Matroid::partition(categories.clone(), c).expect("generated partitions are valid").into())
                .collect();
            Instance::new(rows(rng), constraints).expect("generated instances are valid")
        }
    }
}

pub fn values(rng: &mut (impl Rng + ?Sized), m: usize, max: i64) -> Vec<Value> {
    (0..m).map(|_| int(rng.gen_range(0..=max))).collect()
}

/// `k` nonempty categories covering `0..m` (empty when `m == 0`).
pub fn random_categories(rng: &mut (impl Rng + ?Sized), m: usize, k: usize) -> Vec<Vec<Item>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let k = k.clamp(1, m);
    let mut items: Vec<Item> = (0..m).collect();
    items.shuffle(rng);
    let mut cats: Vec<Vec<Item>> = items[..k].iter().map(|&g| vec![g]).collect();
    for &g in &items[k..] {
        cats[rng.gen_range(0..k)].push(g);
    }
    for c in &mut cats {
        c.sort_unstable();
    }
    cats.sort();
    cats
}

/// `caps[i][h]` with enough total capacity in each category.
pub fn capacities(rng: &mut (impl Rng + ?Sized), n: usize, categories: &[Vec<Item>], identical: bool) -> Vec<Vec<usize>> {
    let mut caps = vec![vec![0; categories.len()]; n];
    for (h, cat) in categories.iter().enumerate() {
        let size = cat.len();
        if identical {
            let c = size.div_ceil(n) + rng.gen_range(0..=1);
            caps.iter_mut().for_each(|row| row[h] = c);
            continue;
        }
        for row in caps.iter_mut() {
            row[h] = rng.gen_range(0..=size);
        }
        while caps.iter().map(|r| r[h]).sum::<usize>() < size {
            caps[rng.gen_range(0..n)][h] += 1;
        }
    }
    caps
}

/// A uniform, partition, laminar or transversal matroid on `m` items.
/// Transversal draws may leave no complete feasible allocation; callers retry.
pub fn base_orderable(rng: &mut (impl Rng + ?Sized), n: usize, m: usize, k: usize) -> Matroid {
    let spec = match rng.gen_range(0..4) {
        0 => MatroidSpec::Uniform { capacity: m.div_ceil(n) + rng.gen_range(0..=1) },
        1 => {
            let categories = random_categories(rng, m, k);
            let capacities = categories.iter().map(|c| c.len().div_ceil(n) + rng.gen_range(0..=1)).collect();
            MatroidSpec::Partition { categories, capacities }
        }
        2 => {
            let cats = random_categories(rng, m, k);
            let mut capacities: Vec<usize> = cats.iter().map(|c| c.len().div_ceil(n) + rng.gen_range(0..=1)).collect();
            let top = m.div_ceil(n) + rng.gen_range(0..=1);
            let mut sets = cats;
            sets.push((0..m).collect());
            capacities.push(top);
            MatroidSpec::Laminar { sets, capacities }
        }
        _ => {
            let right = m.div_ceil(n) + rng.gen_range(0..=2);
            let adjacency = (0..m)
                .map(|_| {
                    let mut adj: Vec<usize> = (0..right).filter(|_| rng.gen_bool(0.6)).collect();
                    if adj.is_empty() {
                        adj.push(rng.gen_range(0..right.max(1)));
                    }
                    adj
                })
                .collect();
            MatroidSpec::Transversal { adjacency }
        }
    };
    Matroid::from_spec(&spec, m).expect("generated matroids are valid")
}
