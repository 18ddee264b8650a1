//! Monte-Carlo check of the analytic evaluator.
//!
//! Each trial fixes a hidden world: every vertex's price is drawn from its
//! tier distribution (or it does not sell, with the residual mass). The agent
//! follows the walk and buys at the first vertex whose price fits in what is
//! left of the budget.
//!
//! Trial `t` draws from ChaCha8 stream `t` of the seed, and vertex `v` always
//! reads the word pair at offset `2v` of that stream, so a world does not
//! depend on visiting order or on how trials are split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eval::success_probability;
use crate::graph::VertexId;
use crate::instance::{Instance, Walk};
use crate::EPS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub trials: u64,
    pub successes: u64,
    pub empirical_rate: f64,
    pub analytic_rate: f64,
    /// `sqrt(analytic * (1 - analytic) / trials)`.
    pub stderr: f64,
}

impl SimReport {
    /// `|empirical - analytic| <= z * stderr`.
    pub fn within(&self, z: f64) -> bool {
        (self.empirical_rate - self.analytic_rate).abs() <= z * self.stderr + EPS
    }
}

/// When a trial stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StoppingRule {
    /// Stop at the first purchase.
    #[default]
    FirstPurchase,
    /// Walk to the end and record whether any purchase was possible.
    ScanAll,
}

/// Price of `v` in trial `rng`'s world, `None` when `v` does not sell.
fn realized_cost(instance: &Instance, rng: &mut ChaCha8Rng, v: VertexId) -> Option<f64> {
    rng.set_word_pos(2 * v as u128);
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for t in instance.site(v).tiers() {
        acc += t.prob;
        if u < acc {
            return Some(t.cost);
        }
    }
    None
}

fn stream(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Outcome of one trial.
pub fn run_trial(instance: &Instance, walk: &Walk, budget: f64, seed: u64, trial: u64, rule: StoppingRule) -> bool {
    let mut rng = stream(seed, trial);
    let mut seen = vec![false; instance.vertex_count()];
    let mut success = false;
    for (&v, &spent) in walk.vertices().iter().zip(walk.prefix_cost()) {
        if spent > budget + EPS {
            break;
        }
        if std::mem::replace(&mut seen[v], true) || instance.site(v).is_empty() {
            continue;
        }
        if let Some(cost) = realized_cost(instance, &mut rng, v) {
            if cost <= budget - spent + EPS {
                success = true;
                if rule == StoppingRule::FirstPurchase {
                    break;
                }
            }
        }
    }
    success
}

pub fn simulate(instance: &Instance, walk: &Walk, budget: f64, trials: u64, seed: u64) -> SimReport {
    simulate_with(instance, walk, budget, trials, seed, StoppingRule::FirstPurchase)
}

pub fn simulate_with(
    instance: &Instance,
    walk: &Walk,
    budget: f64,
    trials: u64,
    seed: u64,
    rule: StoppingRule,
) -> SimReport {
    assert!(trials >= 1, "at least one trial");
    let successes = (0..trials)
        .into_par_iter()
        .filter(|&t| run_trial(instance, walk, budget, seed, t, rule))
        .count() as u64;
    let analytic = success_probability(instance, walk, budget);
    SimReport {
        trials,
        successes,
        empirical_rate: successes as f64 / trials as f64,
        analytic_rate: analytic,
        stderr: (analytic * (1.0 - analytic) / trials as f64).sqrt(),
    }
}
