//! Min-Budget for uniform instances (one cost `c`, one probability `p` at
//! every site) by routing along a rooted k-MST.
//!
//! With `k` sites reached the walk succeeds with probability `1 - (1-p)^k`.
//! A tree spanning the root and `k` sites, walked depth-first, costs at most
//! twice its weight, so budget `2 * weight + c` buys at every site reached.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::SolveError;
use crate::eval::{meets_target, success_probability};
use crate::exact::PlanSolution;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::instance::{Instance, Walk};
use crate::search::{SearchLimits, SolveStatus};
use crate::EPS;

/// Largest component size the subset enumeration accepts.
pub const EXACT_MAX_VERTICES: usize = 24;

/// Smallest `k` with `1 - (1-p)^k >= p_succ`, up to the global tolerance.
pub fn required_k(p_succ: f64, p: f64) -> Result<usize, SolveError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(SolveError::Domain(format!("site probability {p} must lie strictly between 0 and 1")));
    }
    if !(p_succ > 0.0 && p_succ < 1.0) {
        return Err(SolveError::Domain(format!("target probability {p_succ} must lie strictly between 0 and 1")));
    }
    let ok = |k: usize| meets_target(1.0 - (1.0 - p).powi(k as i32), p_succ);
    let mut k = ((1.0 - p_succ).ln() / (1.0 - p).ln()).ceil().max(1.0) as usize;
    while k > 1 && ok(k - 1) {
        k -= 1;
    }
    while !ok(k) {
        k += 1;
    }
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KmstMode {
    /// Minimum over all vertex subsets; small components only.
    #[default]
    Exact,
    /// Repeatedly attach the nearest uncovered vertex by a shortest path.
    /// No approximation guarantee.
    Heuristic,
}

impl std::str::FromStr for KmstMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(KmstMode::Exact),
            "heuristic" => Ok(KmstMode::Heuristic),
            other => Err(format!("unknown k-MST mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KmstSolution {
    pub root: VertexId,
    /// Tree vertices in ascending order, root included.
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub weight: f64,
}

impl KmstSolution {
    /// Depth-first tour from the root, children in ascending id order.
    pub fn tour(&self, graph: &Graph) -> Vec<VertexId> {
        let mut children: Vec<Vec<VertexId>> = vec![Vec::new(); graph.vertex_count()];
        for &e in &self.edges {
            let edge = graph.edge(e);
            children[edge.u].push(edge.v);
            children[edge.v].push(edge.u);
        }
        for c in &mut children {
            c.sort_unstable();
        }
        let mut tour = vec![self.root];
        let mut stack: Vec<(VertexId, Option<VertexId>, usize)> = vec![(self.root, None, 0)];
        while let Some((v, parent, next)) = stack.pop() {
            match children[v].get(next) {
                Some(&c) if Some(c) == parent => stack.push((v, parent, next + 1)),
                Some(&c) => {
                    stack.push((v, parent, next + 1));
                    stack.push((c, Some(v), 0));
                    tour.push(c);
                }
                None => {
                    if let Some(p) = parent {
                        tour.push(p);
                    }
                }
            }
        }
        tour
    }
}

/// Rooted k-MST where every non-root vertex counts towards `k`.
pub fn kmst_solve(
    graph: &Graph,
    root: VertexId,
    k: usize,
    mode: KmstMode,
    limits: SearchLimits,
) -> Result<KmstSolution, SolveError> {
    let eligible = vec![true; graph.vertex_count()];
    kmst_solve_with(graph, root, k, &eligible, mode, limits)
}

/// Rooted k-MST where only `eligible` vertices count; others may still be
/// used as connectors.
pub fn kmst_solve_with(
    graph: &Graph,
    root: VertexId,
    k: usize,
    eligible: &[bool],
    mode: KmstMode,
    limits: SearchLimits,
) -> Result<KmstSolution, SolveError> {
    let component = graph.component(root);
    let available = component.iter().filter(|&&v| v != root && eligible[v]).count();
    if available < k {
        return Err(SolveError::InsufficientVertices { required: k, available });
    }
    match mode {
        KmstMode::Exact => exact(graph, root, k, eligible, &component, limits),
        KmstMode::Heuristic => Ok(attach(graph, root, k, eligible)),
    }
}

/// Kruskal over the subgraph induced by `members`. `None` when disconnected.
pub fn minimum_spanning_tree(graph: &Graph, members: &[bool]) -> Option<(Vec<EdgeId>, f64)> {
    let mut order: Vec<EdgeId> =
        (0..graph.edge_count()).filter(|&e| members[graph.edge(e).u] && members[graph.edge(e).v]).collect();
    order.sort_by(|&a, &b| graph.edge(a).weight.total_cmp(&graph.edge(b).weight).then(a.cmp(&b)));
    let mut parent: Vec<usize> = (0..graph.vertex_count()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let need = members.iter().filter(|&&m| m).count().saturating_sub(1);
    let mut edges = Vec::with_capacity(need);
    let mut weight = 0.0;
    for e in order {
        let edge = graph.edge(e);
        let (a, b) = (find(&mut parent, edge.u), find(&mut parent, edge.v));
        if a != b {
            parent[a] = b;
            edges.push(e);
            weight += edge.weight;
        }
    }
    (edges.len() == need).then_some((edges, weight))
}

fn exact(
    graph: &Graph,
    root: VertexId,
    k: usize,
    eligible: &[bool],
    component: &[VertexId],
    limits: SearchLimits,
) -> Result<KmstSolution, SolveError> {
    let others: Vec<VertexId> = component.iter().copied().filter(|&v| v != root).collect();
    if others.len() > EXACT_MAX_VERTICES {
        return Err(SolveError::TooLarge { vertices: component.len(), max: EXACT_MAX_VERTICES + 1 });
    }
    let mut members = vec![false; graph.vertex_count()];
    let mut best: Option<KmstSolution> = None;
    let mut expansions = 0u64;
    for mask in 0u64..(1u64 << others.len()) {
        let count = others.iter().enumerate().filter(|&(i, &v)| mask >> i & 1 == 1 && eligible[v]).count();
        if count < k {
            continue;
        }
        expansions += 1;
        if expansions > limits.max_expansions {
            return Err(SolveError::LimitExceeded { expansions });
        }
        members.iter_mut().for_each(|m| *m = false);
        members[root] = true;
        for (i, &v) in others.iter().enumerate() {
            members[v] = mask >> i & 1 == 1;
        }
        if let Some((edges, weight)) = minimum_spanning_tree(graph, &members) {
            if best.as_ref().is_none_or(|b| weight < b.weight - EPS) {
                let vertices = (0..graph.vertex_count()).filter(|&v| members[v]).collect();
                best = Some(KmstSolution { root, vertices, edges, weight });
            }
        }
    }
    Ok(best.expect("the whole component is a candidate"))
}

fn attach(graph: &Graph, root: VertexId, k: usize, eligible: &[bool]) -> KmstSolution {
    let n = graph.vertex_count();
    let mut in_tree = vec![false; n];
    in_tree[root] = true;
    let mut edges = Vec::new();
    let mut weight = 0.0;
    let mut covered = 0;
    while covered < k {
        // multi-source Dijkstra from the current tree
        let mut dist = vec![f64::INFINITY; n];
        let mut pred: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        for v in 0..n {
            if in_tree[v] {
                dist[v] = 0.0;
                heap.push(Reverse((Key(0.0), v)));
            }
        }
        while let Some(Reverse((Key(d), v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for arc in graph.neighbors(v) {
                let nd = d + arc.weight;
                if nd < dist[arc.to] {
                    dist[arc.to] = nd;
                    pred[arc.to] = Some((v, arc.edge));
                    heap.push(Reverse((Key(nd), arc.to)));
                }
            }
        }
        let target = (0..n)
            .filter(|&v| !in_tree[v] && eligible[v] && dist[v].is_finite())
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)))
            .expect("enough eligible vertices were checked");
        let mut v = target;
        while !in_tree[v] {
            let (u, e) = pred[v].expect("path back to the tree");
            in_tree[v] = true;
            if eligible[v] {
                covered += 1;
            }
            edges.push(e);
            weight += graph.edge(e).weight;
            v = u;
        }
    }
    let vertices = (0..n).filter(|&v| in_tree[v]).collect();
    KmstSolution { root, vertices, edges, weight }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Result of routing along a k-MST.
#[derive(Debug, Clone, PartialEq)]
pub struct KmstRoute {
    pub plan: PlanSolution,
    pub k: usize,
    pub tree: KmstSolution,
    pub cost: f64,
    pub probability: f64,
}

/// The common `(cost, probability)` of a uniform instance.
pub fn uniform_tier(instance: &Instance) -> Result<(f64, f64), SolveError> {
    let mut common: Option<(f64, f64)> = None;
    for v in 0..instance.vertex_count() {
        let tiers = instance.site(v).tiers();
        match tiers {
            [] => {}
            [t] => match common {
                None => common = Some((t.cost, t.prob)),
                Some((c, p)) if (c - t.cost).abs() <= EPS && (p - t.prob).abs() <= EPS => {}
                Some(_) => {
                    return Err(SolveError::NotUniform(format!(
                        "vertex {} sells at {}@{}, others differ",
                        instance.label(v),
                        t.cost,
                        t.prob
                    )))
                }
            },
            _ => {
                return Err(SolveError::NotUniform(format!(
                    "vertex {} has {} tiers",
                    instance.label(v),
                    tiers.len()
                )))
            }
        }
    }
    common.ok_or_else(|| SolveError::NotUniform("no vertex sells the item".into()))
}

pub fn kmst_min_budget(
    instance: &Instance,
    p_succ: f64,
    mode: KmstMode,
    limits: SearchLimits,
) -> Result<KmstRoute, SolveError> {
    let (cost, p) = uniform_tier(instance)?;
    let k = required_k(p_succ, p)?;
    let eligible: Vec<bool> = instance.sites().iter().map(|s| !s.is_empty()).collect();
    let graph = instance.graph();
    let tree = kmst_solve_with(graph, instance.start(), k, &eligible, mode, limits)?;
    let mut walk = Vec::new();
    let mut seen = vec![false; instance.vertex_count()];
    let mut reached = 0;
    for v in tree.tour(graph) {
        walk.push(v);
        if !seen[v] && eligible[v] {
            reached += 1;
        }
        seen[v] = true;
        if reached == k {
            break;
        }
    }
    let walk = Walk::new(instance, walk)?;
    let budget = 2.0 * tree.weight + cost;
    let probability = success_probability(instance, &walk, budget);
    if !meets_target(probability, p_succ) {
        return Err(SolveError::Domain(format!("route reaches only {probability} < {p_succ}")));
    }
    let status = match mode {
        KmstMode::Exact => SolveStatus::Optimal,
        KmstMode::Heuristic => SolveStatus::Heuristic,
    };
    Ok(KmstRoute {
        plan: PlanSolution { walk, budget, probability, status, expansions: 0 },
        k,
        tree,
        cost,
        probability: p,
    })
}
