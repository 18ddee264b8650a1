use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SolveError;
use crate::eval::{collected_prize, first_arrivals, meets_target, success_probability};
use crate::exact::PlanSolution;
use crate::graph::EdgeId;
use crate::instance::{Instance, Walk};
use crate::search::SolveStatus;
use crate::EPS;

use super::greedy::greedy_min_budget;
use super::{Construction, GreedyOptions};

/// What a reinforced edge is rewarded with, per unit of walk weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReinforceBy {
    /// Number of sites first reached by the walk.
    #[default]
    Cardinality,
    /// `-ln` of the walk's failure probability at its budget.
    PrizeSum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcoParams {
    pub iterations: usize,
    pub evaporation: f64,
    pub initial_pheromone: f64,
    pub seed: u64,
    pub reinforce: ReinforceBy,
}

impl Default for AcoParams {
    fn default() -> Self {
        AcoParams { iterations: 50, evaporation: 0.05, initial_pheromone: 1.0, seed: 0, reinforce: ReinforceBy::Cardinality }
    }
}

impl AcoParams {
    pub fn with_seed(seed: u64) -> Self {
        AcoParams { seed, ..Default::default() }
    }
}

pub const PHEROMONE_FLOOR: f64 = 1e-12;

/// Pheromone level per edge id.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneMap {
    levels: Vec<f64>,
}

impl PheromoneMap {
    pub fn new(edge_count: usize, initial: f64) -> Self {
        PheromoneMap { levels: vec![initial.max(PHEROMONE_FLOOR); edge_count] }
    }

    pub fn level(&self, e: EdgeId) -> f64 {
        self.levels[e]
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Mean level over `edges`; 1 for an empty path.
    pub fn average(&self, edges: &[EdgeId]) -> f64 {
        if edges.is_empty() {
            return 1.0;
        }
        edges.iter().map(|&e| self.levels[e]).sum::<f64>() / edges.len() as f64
    }

    pub fn evaporate(&mut self, rate: f64) {
        for l in &mut self.levels {
            *l = (*l * (1.0 - rate)).max(PHEROMONE_FLOOR);
        }
    }

    pub fn set(&mut self, e: EdgeId, level: f64) {
        self.levels[e] = if level.is_finite() { level.max(PHEROMONE_FLOOR) } else { PHEROMONE_FLOOR };
    }
}

/// One ant: sample `(site, tier)` pairs with weight `score * pheromone`
/// until the target is met. `None` when the ant gets stuck.
fn construct(
    instance: &Instance,
    p_succ: f64,
    pheromone: &PheromoneMap,
    rng: &mut ChaCha8Rng,
) -> Option<(Walk, f64)> {
    let mut state = Construction::new(instance);
    let step_cap = 4 * instance.vertex_count() + 4;
    for _ in 0..step_cap {
        let walk = Walk::new(instance, state.walk.clone()).ok()?;
        if meets_target(success_probability(instance, &walk, state.budget), p_succ) {
            return Some((walk, state.budget));
        }
        let tree = state.paths(instance);
        let candidates = state.candidates(instance, &tree, true);
        if candidates.is_empty() {
            return None;
        }
        let weights: Vec<f64> =
            candidates.iter().map(|c| c.score * pheromone.average(&tree.edges_to(c.vertex))).collect();
        let total: f64 = weights.iter().sum();
        let pick = if total > 0.0 && total.is_finite() {
            let mut x = rng.random::<f64>() * total;
            let mut pick = candidates.len() - 1;
            for (i, w) in weights.iter().enumerate() {
                if x < *w {
                    pick = i;
                    break;
                }
                x -= w;
            }
            pick
        } else {
            rng.random_range(0..candidates.len())
        };
        state.take(&tree, &candidates[pick]);
    }
    None
}

pub fn aco_min_budget(instance: &Instance, p_succ: f64, params: &AcoParams) -> Result<PlanSolution, SolveError> {
    if params.iterations == 0 || !(0.0..1.0).contains(&params.evaporation) {
        return Err(SolveError::Domain("ACO needs iterations >= 1 and evaporation in [0, 1)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut pheromone = PheromoneMap::new(instance.graph().edge_count(), params.initial_pheromone);
    let mut best: Option<(Walk, f64)> = None;
    for _ in 0..params.iterations {
        let ant = construct(instance, p_succ, &pheromone, &mut rng);
        pheromone.evaporate(params.evaporation);
        let Some((walk, budget)) = ant else { continue };
        if best.as_ref().is_some_and(|(_, b)| budget >= *b - EPS) {
            continue;
        }
        let weight = walk.travel_cost();
        if weight > 0.0 {
            let reward = match params.reinforce {
                ReinforceBy::Cardinality => first_arrivals(instance, &walk).len() as f64,
                ReinforceBy::PrizeSum => collected_prize(instance, &walk, budget),
            };
            for pair in walk.vertices().windows(2) {
                let arc = instance.graph().arc(pair[0], pair[1]).expect("walk follows edges");
                pheromone.set(arc.edge, arc.weight * reward / weight);
            }
        }
        best = Some((walk, budget));
    }
    match best {
        Some((walk, budget)) => Ok(PlanSolution {
            probability: success_probability(instance, &walk, budget),
            walk,
            budget,
            status: SolveStatus::Heuristic,
            expansions: params.iterations as u64,
        }),
        None => greedy_min_budget(instance, p_succ, GreedyOptions::default()),
    }
}
