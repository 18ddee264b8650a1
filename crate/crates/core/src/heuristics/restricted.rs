use crate::error::SolveError;
use crate::exact::{min_budget_search, PlanSolution, Restriction, SearchOptions};
use crate::instance::Instance;
use crate::search::{SearchLimits, SolveStatus};

fn restricted(
    instance: &Instance,
    p_succ: f64,
    limits: SearchLimits,
    restriction: Restriction,
) -> Result<PlanSolution, SolveError> {
    let options = SearchOptions { limits, pruning: true, restriction };
    let mut sol = min_budget_search(instance, p_succ, &options, None)?;
    if sol.status == SolveStatus::Optimal {
        sol.status = SolveStatus::Heuristic;
    }
    Ok(sol)
}

/// Bounded-length search: walks never grow longer than the incumbent's walk,
/// and every newly reached site must be able to buy at the walk's budget.
pub fn bl_min_budget(instance: &Instance, p_succ: f64, limits: SearchLimits) -> Result<PlanSolution, SolveError> {
    restricted(instance, p_succ, limits, Restriction::BoundedLength)
}

/// Bounded-length search over walks without repeated vertices.
pub fn nb_min_budget(instance: &Instance, p_succ: f64, limits: SearchLimits) -> Result<PlanSolution, SolveError> {
    restricted(instance, p_succ, limits, Restriction::NoBacktrack)
}
