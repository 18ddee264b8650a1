//! Seeded instance generators and brute-force oracles shared by the
//! integration tests. The oracles deliberately avoid the library's evaluator
//! and search code.
#![allow(dead_code)]

use psearch::dtsp::DtspInstance;
use psearch::graph::{Graph, VertexId};
use psearch::{Instance, InstanceBuilder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-9;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random connected graph: a random tree plus extra edges with probability `extra`.
pub fn random_edges(rng: &mut ChaCha8Rng, n: usize, extra: f64) -> Vec<(VertexId, VertexId, f64)> {
    let integral = rng.random_bool(0.5);
    let weight = |rng: &mut ChaCha8Rng| {
        if integral {
            rng.random_range(1..=4) as f64
        } else {
            (rng.random_range(0.5..4.0f64) * 100.0).round() / 100.0
        }
    };
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((u, v, weight(rng)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.iter().any(|&(a, b, _)| (a, b) == (u, v) || (a, b) == (v, u)) && rng.random_bool(extra) {
                edges.push((u, v, weight(rng)));
            }
        }
    }
    edges
}

/// Random tiers: distinct small costs, probabilities summing to at most 0.95
/// (occasionally a single certain tier).
pub fn random_tiers(rng: &mut ChaCha8Rng, max_tiers: usize) -> Vec<(f64, f64)> {
    let count = rng.random_range(0..=max_tiers);
    if count == 1 && rng.random_bool(0.05) {
        return vec![(rng.random_range(0..=4) as f64, 1.0)];
    }
    let mut costs: Vec<f64> = Vec::new();
    while costs.len() < count {
        let c = rng.random_range(0..=12) as f64 / 2.0;
        if !costs.contains(&c) {
            costs.push(c);
        }
    }
    costs.sort_by(f64::total_cmp);
    let mut probs: Vec<f64> = costs.iter().map(|_| rng.random_range(0.02..0.6)).collect();
    let total: f64 = probs.iter().sum();
    if total > 0.95 {
        probs.iter_mut().for_each(|p| *p *= 0.95 / total);
    }
    costs.into_iter().zip(probs).collect()
}

/// Random instance with `2..=max_n` vertices and up to `max_tiers` tiers per site.
pub fn random_instance(seed: u64, max_n: usize, max_tiers: usize) -> Instance {
    let mut rng = rng(seed);
    let n = rng.random_range(2..=max_n);
    let start = rng.random_range(0..n);
    let mut b = InstanceBuilder::new(n).start(start).max_tiers(max_tiers.max(1));
    for (u, v, w) in random_edges(&mut rng, n, 0.3) {
        b.add_edge(u, v, w);
    }
    for v in 0..n {
        if v != start {
            b.set_site(v, random_tiers(&mut rng, max_tiers));
        }
    }
    b.build().expect("generated instance is valid")
}

/// Like [`random_instance`] but every non-start vertex sells the item.
pub fn random_full_instance(seed: u64, max_n: usize, max_tiers: usize) -> Instance {
    let mut rng = rng(seed);
    let n = rng.random_range(2..=max_n);
    let start = rng.random_range(0..n);
    let mut b = InstanceBuilder::new(n).start(start).max_tiers(max_tiers.max(1));
    for (u, v, w) in random_edges(&mut rng, n, 0.3) {
        b.add_edge(u, v, w);
    }
    for v in 0..n {
        if v != start {
            let mut tiers = random_tiers(&mut rng, max_tiers);
            if tiers.is_empty() {
                tiers.push((rng.random_range(0..=4) as f64, rng.random_range(0.05..0.6)));
            }
            b.set_site(v, tiers);
        }
    }
    b.build().expect("generated instance is valid")
}

/// Uniform instance: one tier `c@p` at every non-start vertex.
pub fn random_uniform_instance(seed: u64, max_n: usize) -> (Instance, f64, f64) {
    let mut rng = rng(seed);
    let n = rng.random_range(3..=max_n);
    let c = rng.random_range(1..=5) as f64;
    let p = rng.random_range(0.1..0.6);
    let mut b = InstanceBuilder::new(n).start(0);
    for (u, v, w) in random_edges(&mut rng, n, 0.3) {
        b.add_edge(u, v, w);
    }
    for v in 1..n {
        b.set_site(v, [(c, p)]);
    }
    (b.build().unwrap(), c, p)
}

/// A target strictly below the instance's available mass.
pub fn random_target(seed: u64, instance: &Instance) -> f64 {
    let mut rng = rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let avail = available(instance);
    (avail * rng.random_range(0.2..1.0)).min(avail - 1e-6).max(0.0)
}

/// Random walk from the start with `0..=max_edges` steps.
pub fn random_walk(rng: &mut ChaCha8Rng, graph: &Graph, start: VertexId, max_edges: usize) -> Vec<VertexId> {
    let steps = rng.random_range(0..=max_edges);
    let mut walk = vec![start];
    for _ in 0..steps {
        let nb = graph.neighbors(*walk.last().unwrap());
        if nb.is_empty() {
            break;
        }
        walk.push(nb[rng.random_range(0..nb.len())].to);
    }
    walk
}

/// Available probability mass by direct reachability search.
pub fn available(instance: &Instance) -> f64 {
    let n = instance.vertex_count();
    let mut seen = vec![false; n];
    let mut stack = vec![instance.start()];
    seen[instance.start()] = true;
    let mut failure = 1.0;
    while let Some(v) = stack.pop() {
        let mass: f64 = instance.site(v).tiers().iter().map(|t| t.prob).sum();
        failure *= 1.0 - mass;
        for a in instance.graph().neighbors(v) {
            if !seen[a.to] {
                seen[a.to] = true;
                stack.push(a.to);
            }
        }
    }
    1.0 - failure
}

/// Success probability by direct definition.
pub fn naive_success(instance: &Instance, arrivals: &[(VertexId, f64)], budget: f64) -> f64 {
    let mut failure = 1.0;
    for &(v, spent) in arrivals {
        let mass: f64 =
            instance.site(v).tiers().iter().filter(|t| t.cost <= budget - spent + TOL).map(|t| t.prob).sum();
        failure *= 1.0 - mass;
    }
    1.0 - failure
}

/// First arrivals of a raw vertex sequence.
pub fn naive_arrivals(instance: &Instance, walk: &[VertexId]) -> Vec<(VertexId, f64)> {
    let mut seen = vec![false; instance.vertex_count()];
    let mut spent = 0.0;
    let mut out = Vec::new();
    for (i, &v) in walk.iter().enumerate() {
        if i > 0 {
            spent += instance.graph().edge_weight(walk[i - 1], v).expect("walk follows edges");
        }
        if !seen[v] {
            seen[v] = true;
            out.push((v, spent));
        }
    }
    out
}

/// Smallest jump-set budget at which the arrivals reach `p_succ`.
pub fn naive_min_budget(instance: &Instance, arrivals: &[(VertexId, f64)], p_succ: f64) -> Option<f64> {
    let mut candidates = vec![0.0];
    for &(v, s) in arrivals {
        candidates.extend(instance.site(v).tiers().iter().map(|t| s + t.cost));
    }
    candidates.sort_by(f64::total_cmp);
    candidates.into_iter().find(|&b| naive_success(instance, arrivals, b) + TOL >= p_succ)
}

/// Calls `visit` with every walk from the start having at most `max_edges` edges.
pub fn for_each_walk(instance: &Instance, max_edges: usize, visit: &mut dyn FnMut(&[VertexId], f64)) {
    fn rec(
        g: &Graph,
        walk: &mut Vec<VertexId>,
        spent: f64,
        left: usize,
        visit: &mut dyn FnMut(&[VertexId], f64),
    ) {
        visit(walk, spent);
        if left == 0 {
            return;
        }
        let last = *walk.last().unwrap();
        for a in g.neighbors(last) {
            walk.push(a.to);
            rec(g, walk, spent + a.weight, left - 1, visit);
            walk.pop();
        }
    }
    rec(instance.graph(), &mut vec![instance.start()], 0.0, max_edges, visit);
}

/// Minimal budget over all walks with at most `max_edges` edges.
pub fn oracle_min_budget(instance: &Instance, p_succ: f64, max_edges: usize) -> Option<f64> {
    let mut best: Option<f64> = None;
    for_each_walk(instance, max_edges, &mut |walk, _| {
        let arrivals = naive_arrivals(instance, walk);
        if let Some(b) = naive_min_budget(instance, &arrivals, p_succ) {
            if best.is_none_or(|x| b < x) {
                best = Some(b);
            }
        }
    });
    best
}

/// Maximal success probability over walks with at most `max_edges` edges.
pub fn oracle_max_prob(instance: &Instance, budget: f64, max_edges: usize) -> f64 {
    let mut best: f64 = 0.0;
    for_each_walk(instance, max_edges, &mut |walk, _| {
        best = best.max(naive_success(instance, &naive_arrivals(instance, walk), budget));
    });
    best
}

/// Random Deadline-TSP instance.
pub fn random_dtsp(seed: u64, max_n: usize) -> DtspInstance {
    let mut rng = rng(seed);
    let n = rng.random_range(2..=max_n);
    let g = Graph::from_edges(n, random_edges(&mut rng, n, 0.3));
    let prize = (0..n).map(|v| if v == 0 { 0.0 } else { rng.random_range(0..=3) as f64 }).collect();
    let deadline = (0..n).map(|_| rng.random_range(0..=10) as f64).collect();
    DtspInstance::new(g, 0, prize, deadline)
}

/// Best Deadline-TSP prize over walks with at most `max_edges` edges.
pub fn oracle_dtsp(dtsp: &DtspInstance, max_edges: usize) -> f64 {
    fn rec(d: &DtspInstance, walk: &mut Vec<VertexId>, left: usize, best: &mut f64) {
        let mut seen = vec![false; d.vertex_count()];
        let mut t = 0.0;
        let mut prize = 0.0;
        for (i, &v) in walk.iter().enumerate() {
            if i > 0 {
                t += d.graph().edge_weight(walk[i - 1], v).unwrap();
            }
            if !seen[v] {
                seen[v] = true;
                if t <= d.deadline(v) + TOL {
                    prize += d.prize(v);
                }
            }
        }
        *best = best.max(prize);
        if left == 0 {
            return;
        }
        let last = *walk.last().unwrap();
        for a in d.graph().neighbors(last) {
            walk.push(a.to);
            rec(d, walk, left - 1, best);
            walk.pop();
        }
    }
    let mut best = 0.0;
    rec(dtsp, &mut vec![dtsp.root()], max_edges, &mut best);
    best
}

/// Minimum rooted tree weight over vertex subsets whose induced subgraph is
/// connected and holds at least `k` non-root vertices.
pub fn oracle_kmst(graph: &Graph, root: VertexId, k: usize) -> Option<f64> {
    let n = graph.vertex_count();
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << n) {
        if mask >> root & 1 == 0 || (mask.count_ones() as usize) < k + 1 {
            continue;
        }
        // Prim on the induced subgraph
        let inside = |v: usize| mask >> v & 1 == 1;
        let mut in_tree = vec![false; n];
        in_tree[root] = true;
        let mut weight = 0.0;
        let mut added = 1;
        loop {
            let mut pick: Option<(f64, usize)> = None;
            for e in graph.edges() {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    if in_tree[a] && !in_tree[b] && inside(b) && pick.is_none_or(|(w, _)| e.weight < w) {
                        pick = Some((e.weight, b));
                    }
                }
            }
            match pick {
                Some((w, b)) => {
                    in_tree[b] = true;
                    weight += w;
                    added += 1;
                }
                None => break,
            }
        }
        if added == mask.count_ones() && best.is_none_or(|b| weight < b) {
            best = Some(weight);
        }
    }
    best
}
