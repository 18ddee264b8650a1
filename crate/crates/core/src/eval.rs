//! Analytic evaluation of fixed walks.
//!
//! A tier `(c, p)` of site `v` counts when the walk first reaches `v` with at
//! least `c` budget left. Budgets only shrink along a walk, so only first
//! arrivals matter, and success is a step function of the initial budget
//! whose jumps sit at `arrival_spent + c` for every first arrival.

use std::ops::Range;

use crate::graph::VertexId;
use crate::instance::{Instance, Walk};
use crate::{EPS, PRIZE_CAP};

/// Tiers counted at one first arrival.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectionEvent {
    pub vertex: VertexId,
    /// Position of the first arrival within the walk.
    pub position: usize,
    pub arrival_spent: f64,
    pub tiers_counted: Range<usize>,
}

/// `true` when `achieved` reaches `target` up to the global tolerance.
#[inline]
pub fn meets_target(achieved: f64, target: f64) -> bool {
    achieved + EPS >= target
}

/// `-ln(1 - p)`, clamped at [`PRIZE_CAP`].
pub fn prize_of(p: f64) -> f64 {
    if p >= 1.0 {
        PRIZE_CAP
    } else {
        (-(1.0 - p).ln()).clamp(0.0, PRIZE_CAP)
    }
}

/// First arrival `(vertex, spent)` of every tier-bearing vertex, in walk order.
pub fn first_arrivals(instance: &Instance, walk: &Walk) -> Vec<(VertexId, f64)> {
    let mut seen = vec![false; instance.vertex_count()];
    let mut out = Vec::new();
    for (&v, &spent) in walk.vertices().iter().zip(walk.prefix_cost()) {
        if !seen[v] {
            seen[v] = true;
            if !instance.site(v).is_empty() {
                out.push((v, spent));
            }
        }
    }
    out
}

pub fn collection_events(instance: &Instance, walk: &Walk, budget: f64) -> Vec<CollectionEvent> {
    let mut seen = vec![false; instance.vertex_count()];
    let mut out = Vec::new();
    for (pos, (&v, &spent)) in walk.vertices().iter().zip(walk.prefix_cost()).enumerate() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        let k = instance.site(v).affordable_count(budget - spent);
        if k > 0 {
            out.push(CollectionEvent { vertex: v, position: pos, arrival_spent: spent, tiers_counted: 0..k });
        }
    }
    out
}

/// Failure probability given first arrivals and an initial budget.
pub fn failure_at(instance: &Instance, arrivals: &[(VertexId, f64)], budget: f64) -> f64 {
    arrivals
        .iter()
        .map(|&(v, spent)| 1.0 - instance.site(v).mass_within(budget - spent))
        .product()
}

pub fn success_probability(instance: &Instance, walk: &Walk, budget: f64) -> f64 {
    let failure = failure_at(instance, &first_arrivals(instance, walk), budget);
    (1.0 - failure).clamp(0.0, 1.0)
}

/// Budgets at which the success probability of a walk can change.
pub fn candidate_budgets(instance: &Instance, arrivals: &[(VertexId, f64)]) -> Vec<f64> {
    let mut out = vec![0.0];
    for &(v, spent) in arrivals {
        out.extend(instance.site(v).tiers().iter().map(|t| spent + t.cost));
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= EPS);
    out
}

/// Smallest candidate budget meeting `p_succ`, or `None` when unattainable.
pub fn min_budget_over_arrivals(
    instance: &Instance,
    arrivals: &[(VertexId, f64)],
    p_succ: f64,
) -> Option<f64> {
    let candidates = candidate_budgets(instance, arrivals);
    let ok = |b: f64| meets_target(1.0 - failure_at(instance, arrivals, b), p_succ);
    // success is monotone in the budget
    let i = candidates.partition_point(|&b| !ok(b));
    candidates.get(i).copied()
}

/// Minimal initial budget with which `walk` succeeds with probability at
/// least `p_succ`. `None` means the walk cannot reach `p_succ` at any budget.
pub fn minimal_budget_for_walk(instance: &Instance, walk: &Walk, p_succ: f64) -> Option<f64> {
    min_budget_over_arrivals(instance, &first_arrivals(instance, walk), p_succ)
}

/// `-ln(1 - success_probability)`: the additive form of the objective.
/// Clamped at [`PRIZE_CAP`] when the walk succeeds with certainty.
pub fn collected_prize(instance: &Instance, walk: &Walk, budget: f64) -> f64 {
    let failure = failure_at(instance, &first_arrivals(instance, walk), budget);
    if failure <= 0.0 {
        PRIZE_CAP
    } else {
        (-failure.ln()).clamp(0.0, PRIZE_CAP)
    }
}

/// Summed per-event prizes; equals [`collected_prize`] up to rounding.
pub fn prize_ledger(instance: &Instance, walk: &Walk, budget: f64) -> Vec<(VertexId, f64)> {
    collection_events(instance, walk, budget)
        .into_iter()
        .map(|e| {
            let site = instance.site(e.vertex);
            (e.vertex, prize_of(site.cumulative(e.tiers_counted.end - 1)))
        })
        .collect()
}
