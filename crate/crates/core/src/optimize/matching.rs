//! Bipartite matching by augmenting paths.
//!
//! All searches visit right vertices in increasing id, so results are
//! deterministic for a given adjacency.

use crate::error::{input, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// `adj[l]` lists the right neighbours of left vertex `l`.
    pub fn new(left: usize, right: usize, mut adj: Vec<Vec<usize>>) -> Self {
        assert_eq!(adj.len(), left, "adjacency must have one row per left vertex");
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
            assert!(row.iter().all(|&r| r < right), "right vertex out of range");
        }
        BipartiteGraph { left, right, adj }
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn neighbours(&self, l: usize) -> &[usize] {
        &self.adj[l]
    }

    pub fn has_edge(&self, l: usize, r: usize) -> bool {
        self.adj[l].binary_search(&r).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    left_to_right: Vec<Option<usize>>,
    right_to_left: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(g: &BipartiteGraph) -> Self {
        Matching { left_to_right: vec![None; g.left], right_to_left: vec![None; g.right] }
    }

    pub fn size(&self) -> usize {
        self.left_to_right.iter().flatten().count()
    }

    pub fn left_mate(&self, l: usize) -> Option<usize> {
        self.left_to_right[l]
    }

    pub fn right_mate(&self, r: usize) -> Option<usize> {
        self.right_to_left[r]
    }

    /// Matched `(left, right)` pairs in increasing left order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.left_to_right
            .iter()
            .enumerate()
            .filter_map(|(l, r)| r.map(|r| (l, r)))
            .collect()
    }

    /// Which vertices of `order` are matched, position by position.
    pub fn saturation(&self, order: &[usize]) -> Vec<bool> {
        order.iter().map(|&l| self.left_to_right[l].is_some()).collect()
    }

    /// Tries to match the free left vertex `l` along an augmenting path.
    fn augment_from(&mut self, g: &BipartiteGraph, l: usize, visited: &mut [bool]) -> bool {
        for &r in &g.adj[l] {
            if visited[r] {
                continue;
            }
            visited[r] = true;
            let free = match self.right_to_left[r] {
                None => true,
                Some(other) => self.augment_from(g, other, visited),
            };
            if free {
                self.left_to_right[l] = Some(r);
                self.right_to_left[r] = Some(l);
                return true;
            }
        }
        false
    }
}

/// Maximum-cardinality matching.
pub fn max_matching(g: &BipartiteGraph) -> Matching {
    let mut m = Matching::empty(g);
    let mut visited = vec![false; g.right];
    for l in 0..g.left {
        visited.iter_mut().for_each(|v| *v = false);
        m.augment_from(g, l, &mut visited);
    }
    m
}

/// Matching whose saturation vector over `order` is lexicographically maximum.
///
/// Left vertices are processed in priority order; each tries one augmenting
/// path. Augmenting never unmatches a left vertex, and the matchable left sets
/// form a matroid, so the greedy pass is lexicographically optimal and also of
/// maximum cardinality.
pub fn priority_matching(g: &BipartiteGraph, order: &[usize]) -> Result<Matching> {
    let mut seen = vec![false; g.left];
    if order.len() != g.left {
        return input(format!("priority order has {} entries for {} left vertices", order.len(), g.left));
    }
    for &l in order {
        if l >= g.left || std::mem::replace(&mut seen[l], true) {
            return input("priority order must be a permutation of the left vertices");
        }
    }
    let mut m = Matching::empty(g);
    let mut visited = vec![false; g.right];
    for &l in order {
        visited.iter_mut().for_each(|v| *v = false);
        m.augment_from(g, l, &mut visited);
    }
    debug_assert_eq!(m.size(), max_matching(g).size());
    Ok(m)
}
