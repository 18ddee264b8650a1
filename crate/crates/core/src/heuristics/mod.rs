//! Min-Budget heuristics: Greedy, ant colony optimisation, and the
//! bounded-length / no-backtrack restrictions of the exact search.

mod aco;
mod greedy;
mod restricted;

pub use aco::{aco_min_budget, AcoParams, PheromoneMap, ReinforceBy};
pub use greedy::{greedy_max_prob, greedy_min_budget, greedy_score, GreedyOptions, ZERO_DISTANCE};
pub use restricted::{bl_min_budget, nb_min_budget};

use crate::graph::{Allowed, PathTree, VertexId};
use crate::instance::Instance;

/// One selectable `(site, tier)` pair during walk construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Candidate {
    pub vertex: VertexId,
    pub tier: usize,
    pub distance: f64,
    pub cost: f64,
    pub score: f64,
}

/// Walk under construction, with the budget it has committed to so far.
#[derive(Debug, Clone)]
pub(crate) struct Construction {
    pub walk: Vec<VertexId>,
    pub visited: Vec<bool>,
    pub spent: f64,
    pub budget: f64,
}

impl Construction {
    pub fn new(instance: &Instance) -> Self {
        let mut visited = vec![false; instance.vertex_count()];
        visited[instance.start()] = true;
        Construction { walk: vec![instance.start()], visited, spent: 0.0, budget: 0.0 }
    }

    pub fn last(&self) -> VertexId {
        *self.walk.last().unwrap()
    }

    /// Shortest paths from the current position whose interior stays on
    /// already visited vertices.
    pub fn paths(&self, instance: &Instance) -> PathTree {
        instance.graph().shortest_path_tree(self.last(), Allowed::Only(&self.visited))
    }

    /// Scored candidates in ascending `(vertex, cost)` order.
    pub fn candidates(&self, instance: &Instance, tree: &PathTree, unvisited_only: bool) -> Vec<Candidate> {
        let mut out = Vec::new();
        for v in 0..instance.vertex_count() {
            let w = tree.dist[v];
            if v == self.last() || !w.is_finite() || (unvisited_only && self.visited[v]) {
                continue;
            }
            let site = instance.site(v);
            for (i, t) in site.tiers().iter().enumerate() {
                let score = greedy_score(site.cumulative(i), w, t.cost);
                out.push(Candidate { vertex: v, tier: i, distance: w, cost: t.cost, score });
            }
        }
        out
    }

    /// Moves to the candidate along its restricted shortest path and raises
    /// the budget so that its tier can be bought on arrival.
    pub fn take(&mut self, tree: &PathTree, c: &Candidate) {
        let path = tree.path_to(c.vertex).expect("candidate is reachable");
        for &u in &path[1..] {
            self.visited[u] = true;
            self.walk.push(u);
        }
        self.budget = self.budget.max(self.spent + c.distance + c.cost);
        self.spent += c.distance;
    }
}
