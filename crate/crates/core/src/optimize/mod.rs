//! Matching and matroid-intersection engines.

pub mod intersection;
pub mod matching;

pub use intersection::{max_weight_common_independent, max_weight_swm, IntersectionProblem, MatroidPair};
pub use matching::{max_matching, priority_matching, BipartiteGraph, Matching};

use crate::error::Result;
use crate::model::{Agent, Instance, Item};
use crate::value::Value;

/// Bipartite graph between agents with spare capacity and unallocated items
/// they value at 1.
#[derive(Debug, Clone)]
pub struct AgentItemGraph {
    agents: Vec<Agent>,
    items: Vec<Item>,
    graph: BipartiteGraph,
}

impl AgentItemGraph {
    /// Left side `agents`, right side `items`, in the given order.
    pub fn new(inst: &Instance, agents: Vec<Agent>, items: Vec<Item>) -> Self {
        let one = Value::from_integer(1);
        let adj = agents
            .iter()
            .map(|&i| (0..items.len()).filter(|&r| inst.item_value(i, items[r]) == one).collect())
            .collect();
        let graph = BipartiteGraph::new(agents.len(), items.len(), adj);
        AgentItemGraph { agents, items, graph }
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    /// Priority matching for an order over agent ids (agents not on the left
    /// side are skipped), as `(agent, item)` pairs.
    pub fn priority_matching(&self, sigma: &[Agent]) -> Result<Vec<(Agent, Item)>> {
        let order: Vec<usize> = sigma
            .iter()
            .filter_map(|a| self.agents.iter().position(|b| b == a))
            .collect();
        let m = priority_matching(&self.graph, &order)?;
        Ok(m.pairs().into_iter().map(|(l, r)| (self.agents[l], self.items[r])).collect())
    }
}
