//! Concrete independence oracles.

use crate::model::Item;
use crate::optimize::matching::{max_matching, BipartiteGraph};

use super::{IndependenceOracle, Matroid, MatroidKind};

#[derive(Debug, Clone)]
pub struct Uniform {
    pub ground: usize,
    pub capacity: usize,
}

impl IndependenceOracle for Uniform {
    fn ground_size(&self) -> usize {
        self.ground
    }

    fn is_independent(&self, set: &[Item]) -> bool {
        set.len() <= self.capacity
    }

    fn kind(&self) -> MatroidKind {
        MatroidKind::Uniform
    }
}

#[derive(Debug, Clone)]
pub struct Partition {
    pub category_of: Vec<usize>,
    pub capacities: Vec<usize>,
}

impl IndependenceOracle for Partition {
    fn ground_size(&self) -> usize {
        self.category_of.len()
    }

    fn is_independent(&self, set: &[Item]) -> bool {
        let mut counts = vec![0usize; self.capacities.len()];
        for &g in set {
            let c = self.category_of[g];
            counts[c] += 1;
            if counts[c] > self.capacities[c] {
                return false;
            }
        }
        true
    }

    fn kind(&self) -> MatroidKind {
        MatroidKind::Partition
    }
}

#[derive(Debug, Clone)]
pub struct Laminar {
    pub ground: usize,
    /// `member[h][g]` is true iff item `g` belongs to set `h`.
    pub member: Vec<Vec<bool>>,
    pub capacities: Vec<usize>,
}

impl IndependenceOracle for Laminar {
    fn ground_size(&self) -> usize {
        self.ground
    }

    fn is_independent(&self, set: &[Item]) -> bool {
        self.member
            .iter()
            .zip(&self.capacities)
            .all(|(m, &cap)| set.iter().filter(|&&g| m[g]).count() <= cap)
    }

    fn kind(&self) -> MatroidKind {
        MatroidKind::Laminar
    }
}

/// Items on the left of a bipartite graph; a set is independent iff it can be
/// matched injectively into the right side.
#[derive(Debug, Clone)]
pub struct Transversal {
    pub adjacency: Vec<Vec<usize>>,
    pub right: usize,
}

impl IndependenceOracle for Transversal {
    fn ground_size(&self) -> usize {
        self.adjacency.len()
    }

    fn is_independent(&self, set: &[Item]) -> bool {
        if set.len() > self.right {
            return false;
        }
        let g = BipartiteGraph::new(
            set.len(),
            self.right,
            set.iter().map(|&x| self.adjacency[x].clone()).collect(),
        );
        max_matching(&g).size() == set.len()
    }

    fn kind(&self) -> MatroidKind {
        MatroidKind::Transversal
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Edges of a multigraph; independent sets are forests.
#[derive(Debug, Clone)]
pub struct Graphic {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl IndependenceOracle for Graphic {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn is_independent(&self, set: &[Item]) -> bool {
        let mut uf = UnionFind::new(self.vertices);
        set.iter().all(|&e| {
            let (u, v) = self.edges[e];
            uf.union(u, v)
        })
    }

    fn kind(&self) -> MatroidKind {
        MatroidKind::Graphic
    }
}

/// Iterated free extension: `count` new items, numbered after the base ground set.
#[derive(Debug, Clone)]
pub struct FreeExtension {
    pub base: Matroid,
    pub rank: usize,
    pub count: usize,
}

impl IndependenceOracle for FreeExtension {
    fn ground_size(&self) -> usize {
        self.base.ground_size() + self.count
    }

    fn is_independent(&self, set: &[Item]) -> bool {
        if set.len() > self.rank {
            return false;
        }
        let n = self.base.ground_size();
        let base_part: Vec<Item> = set.iter().copied().filter(|&g| g < n).collect();
        self.base.is_independent(&base_part)
    }

    fn kind(&self) -> MatroidKind {
        MatroidKind::FreeExtension
    }
}

/// Downward closure of an explicit list of maximal sets.
#[derive(Debug, Clone)]
pub struct Custom {
    pub ground: usize,
    pub member: Vec<Vec<bool>>,
}

impl IndependenceOracle for Custom {
    fn ground_size(&self) -> usize {
        self.ground
    }

    fn is_independent(&self, set: &[Item]) -> bool {
        set.is_empty() || self.member.iter().any(|m| set.iter().all(|&g| m[g]))
    }

    fn kind(&self) -> MatroidKind {
        MatroidKind::Custom
    }
}
