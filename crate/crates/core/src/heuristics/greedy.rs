use crate::error::SolveError;
use crate::eval::{meets_target, success_probability};
use crate::exact::PlanSolution;
use crate::instance::{Instance, Walk};
use crate::search::SolveStatus;

use super::{Candidate, Construction};

/// Stand-in for a zero distance or cost in score denominators.
pub const ZERO_DISTANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreedyOptions {
    /// Only offer sites the walk has not reached yet.
    pub unvisited_only: bool,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions { unvisited_only: true }
    }
}

/// `F_v(c_i) / (w * c_i)`: cumulative probability up to the tier over the
/// product of distance and cost.
pub fn greedy_score(cumulative: f64, distance: f64, cost: f64) -> f64 {
    cumulative / (distance.max(ZERO_DISTANCE) * cost.max(ZERO_DISTANCE))
}

/// Highest score; ties go to the smallest vertex, then the cheapest tier.
pub(crate) fn best(candidates: &[Candidate]) -> Option<&Candidate> {
    let mut best: Option<&Candidate> = None;
    for c in candidates {
        if best.is_none_or(|b| c.score > b.score) {
            best = Some(c);
        }
    }
    best
}

pub fn greedy_min_budget(
    instance: &Instance,
    p_succ: f64,
    options: GreedyOptions,
) -> Result<PlanSolution, SolveError> {
    let mut state = Construction::new(instance);
    let step_cap = 4 * instance.vertex_count() + 4;
    for _ in 0..step_cap {
        let walk = Walk::new(instance, state.walk.clone())?;
        let p = success_probability(instance, &walk, state.budget);
        if meets_target(p, p_succ) {
            return Ok(PlanSolution { walk, budget: state.budget, probability: p, status: SolveStatus::Heuristic, expansions: 0 });
        }
        let tree = state.paths(instance);
        let candidates = state.candidates(instance, &tree, options.unvisited_only);
        let Some(c) = best(&candidates).copied() else { break };
        state.take(&tree, &c);
    }
    Err(SolveError::Stuck)
}

/// Greedy for a fixed budget: keep taking the best site whose tier is still
/// affordable after the trip.
pub fn greedy_max_prob(instance: &Instance, budget: f64, options: GreedyOptions) -> Result<PlanSolution, SolveError> {
    let mut state = Construction::new(instance);
    let step_cap = 4 * instance.vertex_count() + 4;
    for _ in 0..step_cap {
        let tree = state.paths(instance);
        let candidates: Vec<Candidate> = state
            .candidates(instance, &tree, options.unvisited_only)
            .into_iter()
            .filter(|c| state.spent + c.distance + c.cost <= budget + crate::EPS)
            .collect();
        let Some(c) = best(&candidates).copied() else { break };
        state.take(&tree, &c);
    }
    let walk = Walk::new(instance, state.walk)?;
    let probability = success_probability(instance, &walk, budget);
    Ok(PlanSolution { walk, budget, probability, status: SolveStatus::Heuristic, expansions: 0 })
}
