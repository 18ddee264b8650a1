//! Deadline-TSP: collect vertex prizes by reaching vertices no later than
//! their deadlines, starting from a root.
//!
//! Solvers plug in through [`DtspSolver`]. [`ExactDtspSolver`] is a
//! branch-and-bound over walks of the original edge set, sized for small
//! instances; [`GreedyDtspSolver`] is a fast prize-per-length construction.
//! [`approx_max_probability`] chains the reductions from
//! [`transform`](crate::transform) with a solver to plan under a fixed budget.

use crate::error::SolveError;
use crate::eval::{prize_of, success_probability};
use crate::graph::{Allowed, Graph, VertexId};
use crate::instance::{Instance, Walk};
use crate::search::{Budget, DistanceTable, SearchLimits, Segment, SolveStatus};
use crate::transform::{round_prizes, to_deadline_tsp, to_single_cost};
use crate::EPS;

#[derive(Debug, Clone, PartialEq)]
pub struct DtspInstance {
    graph: Graph,
    root: VertexId,
    prize: Vec<f64>,
    deadline: Vec<f64>,
}

impl DtspInstance {
    pub fn new(graph: Graph, root: VertexId, prize: Vec<f64>, deadline: Vec<f64>) -> Self {
        assert_eq!(prize.len(), graph.vertex_count());
        assert_eq!(deadline.len(), graph.vertex_count());
        assert!(prize.iter().all(|&p| p >= 0.0), "prizes must be nonnegative");
        DtspInstance { graph, root, prize, deadline }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn prize(&self, v: VertexId) -> f64 {
        self.prize[v]
    }

    pub fn deadline(&self, v: VertexId) -> f64 {
        self.deadline[v]
    }

    pub fn with_prizes(&self, prize: Vec<f64>) -> Self {
        DtspInstance::new(self.graph.clone(), self.root, prize, self.deadline.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DtspSolution {
    pub walk: Vec<VertexId>,
    pub total_prize: f64,
    /// Vertices whose first arrival met their deadline, in walk order.
    pub collected: Vec<VertexId>,
}

/// Scores a walk: each vertex pays out once, at its first arrival, if that
/// arrival is no later than its deadline.
///
/// Panics if the walk does not start at the root or steps along a non-edge.
pub fn dtsp_prize(dtsp: &DtspInstance, walk: &[VertexId]) -> DtspSolution {
    assert_eq!(walk.first(), Some(&dtsp.root), "walk must start at the root");
    let mut seen = vec![false; dtsp.vertex_count()];
    let mut time = 0.0;
    let mut total = 0.0;
    let mut collected = Vec::new();
    for (i, &v) in walk.iter().enumerate() {
        if i > 0 {
            time += dtsp.graph.edge_weight(walk[i - 1], v).expect("walk steps along edges");
        }
        if !seen[v] {
            seen[v] = true;
            if time <= dtsp.deadline[v] + EPS {
                total += dtsp.prize[v];
                collected.push(v);
            }
        }
    }
    DtspSolution { walk: walk.to_vec(), total_prize: total, collected }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DtspOutcome {
    pub solution: DtspSolution,
    pub status: SolveStatus,
    pub expansions: u64,
}

/// A Deadline-TSP algorithm usable by [`approx_max_probability`].
pub trait DtspSolver {
    fn name(&self) -> &'static str;
    fn solve(&self, dtsp: &DtspInstance) -> Result<DtspOutcome, SolveError>;
}

/// Exhaustive branch-and-bound over walks. A branch is cut when the current
/// prize plus every uncollected prize still reachable by its deadline (via
/// shortest paths) cannot beat the incumbent.
#[derive(Debug, Clone, Default)]
pub struct ExactDtspSolver {
    pub limits: SearchLimits,
    /// Disable bound-based pruning (used to cross-check the bound).
    pub no_pruning: bool,
}

impl ExactDtspSolver {
    pub fn new(limits: SearchLimits) -> Self {
        ExactDtspSolver { limits, no_pruning: false }
    }
}

struct DtspSearch<'a> {
    dtsp: &'a DtspInstance,
    dist: DistanceTable<'a>,
    budget: Budget,
    pruning: bool,
    reached: Vec<bool>,
    segment: Segment,
    walk: Vec<VertexId>,
    prize: f64,
    best: f64,
    best_walk: Vec<VertexId>,
}

impl DtspSearch<'_> {
    fn optimistic(&mut self, at: VertexId, time: f64) -> f64 {
        let row = self.dist.row(at);
        let mut bound = self.prize;
        for u in 0..self.dtsp.vertex_count() {
            if !self.reached[u] && self.dtsp.prize[u] > 0.0 && time + row[u] <= self.dtsp.deadline[u] + EPS {
                bound += self.dtsp.prize[u];
            }
        }
        bound
    }

    fn dfs(&mut self, cur: VertexId, time: f64) {
        if !self.budget.tick() {
            return;
        }
        if self.prize > self.best + EPS {
            self.best = self.prize;
            self.best_walk = self.walk.clone();
        }
        let dtsp = self.dtsp;
        for arc in dtsp.graph.neighbors(cur) {
            let x = arc.to;
            if self.segment.contains(x) {
                continue;
            }
            let t = time + arc.weight;
            let is_new = !self.reached[x];
            let gain = if is_new && t <= dtsp.deadline[x] + EPS { dtsp.prize[x] } else { 0.0 };
            self.reached[x] = true;
            self.prize += gain;
            let keep = !self.pruning || self.optimistic(x, t) > self.best + EPS;
            if keep {
                let token = self.segment.enter(x, is_new);
                self.walk.push(x);
                self.dfs(x, t);
                self.walk.pop();
                self.segment.leave(token);
            }
            self.prize -= gain;
            self.reached[x] = !is_new;
            if self.budget.aborted {
                return;
            }
        }
    }
}

impl DtspSolver for ExactDtspSolver {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn solve(&self, dtsp: &DtspInstance) -> Result<DtspOutcome, SolveError> {
        let n = dtsp.vertex_count();
        if n > self.limits.max_vertices {
            return Err(SolveError::TooLarge { vertices: n, max: self.limits.max_vertices });
        }
        let root = dtsp.root;
        let mut reached = vec![false; n];
        reached[root] = true;
        let root_prize = if dtsp.deadline[root] >= -EPS { dtsp.prize[root] } else { 0.0 };
        let mut search = DtspSearch {
            dtsp,
            dist: DistanceTable::new(&dtsp.graph),
            budget: Budget::new(self.limits),
            pruning: !self.no_pruning,
            reached,
            segment: Segment::new(n, root),
            walk: vec![root],
            prize: root_prize,
            best: root_prize,
            best_walk: vec![root],
        };
        search.dfs(root, 0.0);
        let status = search.budget.status();
        Ok(DtspOutcome {
            solution: dtsp_prize(dtsp, &search.best_walk),
            status,
            expansions: search.budget.expansions,
        })
    }
}

/// Repeatedly heads for the uncollected vertex with the best prize per unit
/// of shortest-path length among those still reachable by their deadline.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyDtspSolver;

impl DtspSolver for GreedyDtspSolver {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn solve(&self, dtsp: &DtspInstance) -> Result<DtspOutcome, SolveError> {
        let n = dtsp.vertex_count();
        let mut seen = vec![false; n];
        let mut walk = vec![dtsp.root];
        seen[dtsp.root] = true;
        let mut time = 0.0;
        let mut cur = dtsp.root;
        let mut steps = 0;
        loop {
            steps += 1;
            let tree = dtsp.graph.shortest_path_tree(cur, Allowed::All);
            let mut choice: Option<(f64, VertexId)> = None;
            for u in 0..n {
                let d = tree.dist[u];
                if seen[u] || dtsp.prize[u] <= 0.0 || !d.is_finite() || time + d > dtsp.deadline[u] + EPS {
                    continue;
                }
                let score = dtsp.prize[u] / d.max(1e-6);
                if choice.is_none_or(|(s, _)| score > s) {
                    choice = Some((score, u));
                }
            }
            let Some((_, target)) = choice else { break };
            let path = tree.path_to(target).expect("target is reachable");
            for &v in &path[1..] {
                seen[v] = true;
                walk.push(v);
            }
            time += tree.dist[target];
            cur = target;
        }
        Ok(DtspOutcome { solution: dtsp_prize(dtsp, &walk), status: SolveStatus::Heuristic, expansions: steps })
    }
}

/// Result of the reduction-based Max-Probability planner.
#[derive(Debug, Clone)]
pub struct ApproxOutcome {
    pub walk: Walk,
    /// Success probability of `walk` on the original instance under the budget.
    pub probability: f64,
    /// Objective value reported by the Deadline-TSP solver (rounded prizes when rounding is on).
    pub solver_prize: f64,
    /// Unrounded prize of the solver's walk, i.e. `-ln(1 - probability)` for canonical walks.
    pub prize: f64,
    /// Smallest conditional tier probability; the guarantee needs it bounded away from zero.
    pub min_conditional_probability: Option<f64>,
    /// Lower-bound constant of the prize rounding step, when rounding was applied.
    pub rounding_c: Option<f64>,
    pub status: SolveStatus,
}

/// Max-Probability through Deadline-TSP: split multi-tier sites, convert to
/// prizes and deadlines, optionally round prizes, solve, and map the walk back.
pub fn approx_max_probability(
    instance: &Instance,
    budget: f64,
    solver: &dyn DtspSolver,
    round: bool,
) -> Result<ApproxOutcome, SolveError> {
    if !(budget >= 0.0) {
        return Err(SolveError::Domain(format!("budget {budget} must be nonnegative")));
    }
    let single = to_single_cost(instance)?;
    let dtsp = to_deadline_tsp(&single, budget);
    let min_conditional_probability = single
        .instance()
        .sites()
        .iter()
        .filter_map(|s| s.tiers().first().map(|t| t.prob))
        .min_by(f64::total_cmp);
    let (target, rounding_c) = if round {
        let r = round_prizes(&dtsp);
        (r.instance, r.lower_bound_c)
    } else {
        (dtsp.clone(), None)
    };
    let outcome = solver.solve(&target)?;
    let split_walk = Walk::new(single.instance(), outcome.solution.walk.clone())?;
    let walk = single.map_walk_back(&split_walk);
    let probability = success_probability(instance, &walk, budget);
    let prize = dtsp_prize(&dtsp, &outcome.solution.walk).total_prize;
    Ok(ApproxOutcome {
        walk,
        probability,
        solver_prize: outcome.solution.total_prize,
        prize,
        min_conditional_probability,
        rounding_c,
        status: outcome.status,
    })
}

/// Prize of a probability, for callers that want the Deadline-TSP view.
pub fn probability_to_prize(p: f64) -> f64 {
    prize_of(p)
}
