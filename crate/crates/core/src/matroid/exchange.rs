//! Bases, feasible-exchange bijections and base-orderability.

use crate::error::{input, Result};
use crate::model::Item;
use crate::optimize::matching::{max_matching, BipartiteGraph};

use super::{mask_items, Matroid};

/// Largest ground set on which bases are enumerated.
pub const BASE_ORDER_GUARD: usize = 12;

fn swapped(set: &[Item], out: Item, inn: Item) -> Vec<Item> {
    let mut s: Vec<Item> = set.iter().copied().filter(|&g| g != out).collect();
    if !s.contains(&inn) {
        s.push(inn);
    }
    s
}

impl Matroid {
    pub fn is_base(&self, set: &[Item]) -> bool {
        self.is_independent(set) && set.len() == self.full_rank()
    }

    /// All bases, each sorted, in increasing bitmask order.
    pub fn bases(&self) -> Result<Vec<Vec<Item>>> {
        self.guard(BASE_ORDER_GUARD, "base enumeration")?;
        let n = self.ground_size();
        let r = self.full_rank();
        Ok((0u32..1 << n)
            .filter(|m| m.count_ones() as usize == r)
            .map(mask_items)
            .filter(|s| self.is_independent(s))
            .collect())
    }

    /// `x` and `y` are a feasible swap between `i_base` and `j_base` when both
    /// `I - x + y` and `J - y + x` stay independent.
    pub fn is_feasible_swap(&self, i_base: &[Item], j_base: &[Item], x: Item, y: Item) -> bool {
        self.is_independent(&swapped(i_base, x, y)) && self.is_independent(&swapped(j_base, y, x))
    }

    /// A bijection `I -> J` whose every pair is a feasible swap, as `(x, mu(x))`
    /// pairs in increasing `x`; `None` if no such bijection exists.
    ///
    /// A perfect matching in the graph of feasible swaps is exactly such a bijection.
    pub fn feasible_exchange_bijection(
        &self,
        i_base: &[Item],
        j_base: &[Item],
    ) -> Result<Option<Vec<(Item, Item)>>> {
        let i = self.checked_set(i_base)?;
        let j = self.checked_set(j_base)?;
        if !self.is_base(&i) || !self.is_base(&j) {
            return input("feasible_exchange_bijection: both arguments must be bases");
        }
        Ok(self.exchange_bijection_unchecked(&i, &j))
    }

    /// Same as [`Matroid::feasible_exchange_bijection`] for two independent sets of
    /// equal size, without the basis check.
    pub(crate) fn exchange_bijection_unchecked(&self, i: &[Item], j: &[Item]) -> Option<Vec<(Item, Item)>> {
        debug_assert_eq!(i.len(), j.len());
        let adj: Vec<Vec<usize>> = i
            .iter()
            .map(|&x| {
                (0..j.len())
                    .filter(|&b| self.is_feasible_swap(i, j, x, j[b]))
                    .collect()
            })
            .collect();
        let m = max_matching(&BipartiteGraph::new(i.len(), j.len(), adj));
        if m.size() < i.len() {
            return None;
        }
        let pairs: Vec<(Item, Item)> = i
            .iter()
            .enumerate()
            .map(|(a, &x)| (x, j[m.left_mate(a).expect("perfect matching")]))
            .collect();
        for &(x, y) in &pairs {
            assert!(self.is_feasible_swap(i, j, x, y), "exchange pair ({x},{y}) is not a feasible swap");
        }
        Some(pairs)
    }

    /// True iff every pair of bases admits a feasible exchange bijection.
    pub fn is_base_orderable(&self) -> Result<bool> {
        let bases = self.bases()?;
        for (a, i) in bases.iter().enumerate() {
            for j in &bases[a + 1..] {
                if self.exchange_bijection_unchecked(i, j).is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
