//! Exact branch-and-bound for Max-Probability and Min-Budget.
//!
//! Both searches enumerate walks depth-first over the real edge set, with
//! neighbours in ascending id order, so among equally good walks the
//! lexicographically smallest one is reported. Revisits are allowed; the
//! only structural cut is that a walk may not return to a vertex it has
//! already passed since it last reached a new vertex (such a cycle collects
//! nothing and only spends budget).
//!
//! Optimistic completions assume every unvisited site is reached by a
//! shortest path from the current vertex and buys at every affordable tier.

use crate::error::SolveError;
use crate::eval::{meets_target, min_budget_over_arrivals, success_probability};
use crate::graph::VertexId;
use crate::instance::{Instance, Walk};
use crate::search::{Budget, DistanceTable, SearchLimits, Segment, SolveStatus, TraceEvent};
use crate::EPS;

/// A walk with the budget it is planned for.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanSolution {
    pub walk: Walk,
    pub budget: f64,
    pub probability: f64,
    pub status: SolveStatus,
    pub expansions: u64,
}

/// Extra restrictions turning the exact search into the BL and NB heuristics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Restriction {
    #[default]
    None,
    /// Walks may not be longer than the incumbent's walk, and the first visit
    /// to every site must be able to buy there.
    BoundedLength,
    /// [`BoundedLength`](Restriction::BoundedLength) plus no repeated vertices.
    NoBacktrack,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub limits: SearchLimits,
    /// Bound-based pruning. Turning it off leaves only the structural cut.
    pub pruning: bool,
    pub restriction: Restriction,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { limits: SearchLimits::default(), pruning: true, restriction: Restriction::None }
    }
}

impl SearchOptions {
    pub fn with_limits(limits: SearchLimits) -> Self {
        SearchOptions { limits, ..Default::default() }
    }
}

type Observer<'o> = Option<&'o mut dyn FnMut(&TraceEvent)>;

fn emit(observer: &mut Observer<'_>, event: impl FnOnce() -> TraceEvent) {
    if let Some(f) = observer.as_mut() {
        f(&event());
    }
}

struct Walker<'a> {
    inst: &'a Instance,
    dist: DistanceTable<'a>,
    budget: Budget,
    visited: Vec<bool>,
    segment: Segment,
    walk: Vec<VertexId>,
    spent: Vec<f64>,
}

impl<'a> Walker<'a> {
    fn new(inst: &'a Instance, limits: SearchLimits) -> Self {
        let n = inst.vertex_count();
        let mut visited = vec![false; n];
        visited[inst.start()] = true;
        Walker {
            inst,
            dist: DistanceTable::new(inst.graph()),
            budget: Budget::new(limits),
            visited,
            segment: Segment::new(n, inst.start()),
            walk: vec![inst.start()],
            spent: vec![0.0],
        }
    }
}

/// Max-Probability: the walk maximising success probability under `budget`.
pub fn solve_max_prob_exact(
    instance: &Instance,
    budget: f64,
    limits: SearchLimits,
) -> Result<PlanSolution, SolveError> {
    max_prob_search(instance, budget, &SearchOptions::with_limits(limits), None)
}

pub fn max_prob_search(
    instance: &Instance,
    budget: f64,
    options: &SearchOptions,
    observer: Option<&mut dyn FnMut(&TraceEvent)>,
) -> Result<PlanSolution, SolveError> {
    if !(budget >= 0.0) {
        return Err(SolveError::Domain(format!("budget {budget} must be nonnegative")));
    }
    check_size(instance, options.limits)?;
    let mut s = MaxProb {
        w: Walker::new(instance, options.limits),
        budget,
        pruning: options.pruning,
        failure: 1.0,
        best: 0.0,
        best_walk: vec![instance.start()],
        observer,
    };
    s.dfs(instance.start());
    let walk = Walk::new(instance, s.best_walk.clone())?;
    Ok(PlanSolution {
        probability: success_probability(instance, &walk, budget),
        walk,
        budget,
        status: s.w.budget.status(),
        expansions: s.w.budget.expansions,
    })
}

struct MaxProb<'a, 'o> {
    w: Walker<'a>,
    budget: f64,
    pruning: bool,
    failure: f64,
    best: f64,
    best_walk: Vec<VertexId>,
    observer: Observer<'o>,
}

impl MaxProb<'_, '_> {
    fn optimistic_failure(&mut self, at: VertexId, spent: f64) -> f64 {
        let inst = self.w.inst;
        let row = self.w.dist.row(at);
        let mut f = self.failure;
        for u in 0..inst.vertex_count() {
            if !self.w.visited[u] && row[u].is_finite() {
                f *= 1.0 - inst.site(u).mass_within(self.budget - spent - row[u]);
            }
        }
        f
    }

    fn dfs(&mut self, cur: VertexId) {
        if !self.w.budget.tick() {
            return;
        }
        let spent = *self.w.spent.last().unwrap();
        let expansions = self.w.budget.expansions;
        emit(&mut self.observer, || TraceEvent::Expand { expansions, depth: self.w.walk.len() - 1, spent });
        let p = 1.0 - self.failure;
        if p > self.best + EPS {
            self.best = p;
            self.best_walk = self.w.walk.clone();
            let walk = self.best_walk.clone();
            emit(&mut self.observer, || TraceEvent::Incumbent { expansions, value: p, walk });
        }
        let inst = self.w.inst;
        for arc in inst.graph().neighbors(cur) {
            let x = arc.to;
            let t = spent + arc.weight;
            if self.w.segment.contains(x) || t > self.budget + EPS {
                continue;
            }
            let is_new = !self.w.visited[x];
            let factor = if is_new { 1.0 - inst.site(x).mass_within(self.budget - t) } else { 1.0 };
            let saved = self.failure;
            self.failure *= factor;
            self.w.visited[x] = true;
            let keep = !self.pruning || 1.0 - self.optimistic_failure(x, t) > self.best + EPS;
            if keep {
                let token = self.w.segment.enter(x, is_new);
                self.w.walk.push(x);
                self.w.spent.push(t);
                self.dfs(x);
                self.w.spent.pop();
                self.w.walk.pop();
                self.w.segment.leave(token);
            }
            self.w.visited[x] = !is_new;
            self.failure = saved;
            if self.w.budget.aborted {
                return;
            }
        }
    }
}

/// Min-Budget: the smallest budget (and a walk) reaching `p_succ`.
pub fn solve_min_budget_exact(
    instance: &Instance,
    p_succ: f64,
    limits: SearchLimits,
) -> Result<PlanSolution, SolveError> {
    min_budget_search(instance, p_succ, &SearchOptions::with_limits(limits), None)
}

pub fn min_budget_search(
    instance: &Instance,
    p_succ: f64,
    options: &SearchOptions,
    observer: Option<&mut dyn FnMut(&TraceEvent)>,
) -> Result<PlanSolution, SolveError> {
    if !(0.0..=1.0).contains(&p_succ) {
        return Err(SolveError::Domain(format!("target probability {p_succ} must lie in [0, 1]")));
    }
    check_size(instance, options.limits)?;
    let available = instance.available_mass();
    if !meets_target(available, p_succ) {
        return Err(SolveError::Infeasible { target: p_succ, available });
    }
    let mut s = MinBudget {
        w: Walker::new(instance, options.limits),
        p_succ,
        pruning: options.pruning,
        restriction: options.restriction,
        arrivals: Vec::new(),
        required: 0.0,
        incumbent: None,
        observer,
    };
    s.dfs(instance.start(), true);
    let status = s.w.budget.status();
    let expansions = s.w.budget.expansions;
    match s.incumbent {
        Some(inc) => {
            let walk = Walk::new(instance, inc.walk)?;
            Ok(PlanSolution {
                probability: success_probability(instance, &walk, inc.budget),
                walk,
                budget: inc.budget,
                status,
                expansions,
            })
        }
        None if status == SolveStatus::LimitExceeded => Err(SolveError::LimitExceeded { expansions }),
        None => Err(SolveError::NoSolution),
    }
}

struct Incumbent {
    walk: Vec<VertexId>,
    budget: f64,
    travel: f64,
}

struct MinBudget<'a, 'o> {
    w: Walker<'a>,
    p_succ: f64,
    pruning: bool,
    restriction: Restriction,
    /// First arrivals at tier-bearing vertices.
    arrivals: Vec<(VertexId, f64)>,
    /// Restricted modes: budget needed so that every first visit can buy.
    required: f64,
    incumbent: Option<Incumbent>,
    observer: Observer<'o>,
}

impl MinBudget<'_, '_> {
    fn restricted(&self) -> bool {
        self.restriction != Restriction::None
    }

    /// `true` when the subtree entered at `at` (with `spent`) may still beat `limit`.
    fn promising(&mut self, at: VertexId, spent: f64, limit: f64) -> bool {
        let inst = self.w.inst;
        let row = self.w.dist.row(at);
        // cheapest way to count anything new
        let mut cheapest = f64::INFINITY;
        let mut failure: f64 = self
            .arrivals
            .iter()
            .map(|&(v, s)| 1.0 - inst.site(v).mass_within(limit - s))
            .product();
        for u in 0..inst.vertex_count() {
            if self.w.visited[u] || !row[u].is_finite() {
                continue;
            }
            let site = inst.site(u);
            if let Some(c) = site.cheapest_useful_cost() {
                cheapest = cheapest.min(row[u] + c);
            }
            failure *= 1.0 - site.mass_within(limit - spent - row[u]);
        }
        let at_is_fresh = self.arrivals.last().is_some_and(|&(v, s)| v == at && s == spent);
        if !at_is_fresh && spent + cheapest >= limit - EPS {
            return false;
        }
        meets_target(1.0 - failure, self.p_succ)
    }

    fn consider(&mut self) {
        let inst = self.w.inst;
        let Some(mut b) = min_budget_over_arrivals(inst, &self.arrivals, self.p_succ) else {
            return;
        };
        if self.restricted() {
            b = b.max(self.required);
        }
        let better = self.incumbent.as_ref().is_none_or(|inc| b < inc.budget - EPS);
        if better {
            let travel = *self.w.spent.last().unwrap();
            let walk = self.w.walk.clone();
            if let Some(f) = self.observer.as_mut() {
                f(&TraceEvent::Incumbent { expansions: self.w.budget.expansions, value: b, walk: walk.clone() });
            }
            self.incumbent = Some(Incumbent { walk, budget: b, travel });
        }
    }

    fn dfs(&mut self, cur: VertexId, fresh: bool) {
        if !self.w.budget.tick() {
            return;
        }
        let spent = *self.w.spent.last().unwrap();
        let expansions = self.w.budget.expansions;
        emit(&mut self.observer, || TraceEvent::Expand { expansions, depth: self.w.walk.len() - 1, spent });
        // only a new first arrival can change the walk's minimal budget
        if fresh {
            self.consider();
        }
        let inst = self.w.inst;
        for arc in inst.graph().neighbors(cur) {
            let x = arc.to;
            if self.w.segment.contains(x) {
                continue;
            }
            let t = spent + arc.weight;
            let is_new = !self.w.visited[x];
            let site = inst.site(x);
            let saved_required = self.required;
            if self.restricted() {
                if self.restriction == Restriction::NoBacktrack && !is_new {
                    continue;
                }
                if let Some(inc) = &self.incumbent {
                    if t > inc.travel + EPS {
                        continue;
                    }
                }
                if is_new {
                    let Some(c) = site.cheapest_useful_cost() else { continue };
                    self.required = self.required.max(t + c);
                    if let Some(inc) = &self.incumbent {
                        if self.required >= inc.budget - EPS {
                            self.required = saved_required;
                            continue;
                        }
                    }
                }
            }
            let pushed = is_new && !site.is_empty();
            if pushed {
                self.arrivals.push((x, t));
            }
            self.w.visited[x] = true;
            let limit = self.incumbent.as_ref().map(|inc| inc.budget);
            let keep = match limit {
                Some(limit) if self.pruning => self.promising(x, t, limit),
                _ => true,
            };
            if keep {
                let token = self.w.segment.enter(x, is_new);
                self.w.walk.push(x);
                self.w.spent.push(t);
                self.dfs(x, pushed);
                self.w.spent.pop();
                self.w.walk.pop();
                self.w.segment.leave(token);
            }
            self.w.visited[x] = !is_new;
            if pushed {
                self.arrivals.pop();
            }
            self.required = saved_required;
            if self.w.budget.aborted {
                return;
            }
        }
    }
}

fn check_size(instance: &Instance, limits: SearchLimits) -> Result<(), SolveError> {
    let n = instance.vertex_count();
    if n > limits.max_vertices {
        Err(SolveError::TooLarge { vertices: n, max: limits.max_vertices })
    } else {
        Ok(())
    }
}

/// Convenience wrapper used by tests and the CLI: the walk of a solution as
/// a plain [`Walk`] evaluated at its budget.
pub fn describe(solution: &PlanSolution, instance: &Instance) -> String {
    let labels: Vec<String> = solution.walk.labels(instance).iter().map(u64::to_string).collect();
    format!(
        "walk {} budget {} probability {:.6} ({})",
        labels.join(","),
        solution.budget,
        solution.probability,
        solution.status.as_str()
    )
}
