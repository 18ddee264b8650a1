use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::SolveError;
use crate::graph::{Graph, VertexId};
use crate::instance::{Instance, InstanceBuilder};

use super::{CostModel, GeneratorConfig, ProbModel, SmallWorld, Topology};

/// Attempts made before giving up on a connected small world.
pub const MAX_REGENERATIONS: u64 = 100;

fn bad(msg: impl Into<String>) -> SolveError {
    SolveError::Domain(msg.into())
}

/// Ring lattice with each edge rewired independently. May be disconnected.
pub fn small_world_once(params: &SmallWorld, seed: u64) -> Result<Graph, SolveError> {
    let SmallWorld { n, neighbors, rewire_prob, edge_cost_range: (lo, hi) } = *params;
    if neighbors % 2 != 0 || neighbors == 0 {
        return Err(bad(format!("neighbors must be even and positive, got {neighbors}")));
    }
    if n < neighbors + 1 {
        return Err(bad(format!("need n >= neighbors + 1, got n = {n}")));
    }
    if !(0.0..=1.0).contains(&rewire_prob) {
        return Err(bad(format!("rewire probability {rewire_prob} outside [0, 1]")));
    }
    if !(lo > 0.0 && lo <= hi) {
        return Err(bad(format!("edge cost range [{lo}, {hi}] must be positive and ordered")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); n];
    let mut edges = Vec::with_capacity(n * neighbors / 2);
    for u in 0..n {
        for j in 1..=neighbors / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
            edges.push((u, v));
        }
    }
    for e in &mut edges {
        let (u, v) = *e;
        if !rng.random_bool(rewire_prob) || adj[u].len() >= n - 1 {
            continue;
        }
        let w = loop {
            let w = rng.random_range(0..n);
            if w != u && !adj[u].contains(&w) {
                break w;
            }
        };
        adj[u].remove(&v);
        adj[v].remove(&u);
        adj[u].insert(w);
        adj[w].insert(u);
        *e = (u, w);
    }
    let weighted: Vec<(VertexId, VertexId, f64)> = edges
        .into_iter()
        .map(|(u, v)| (u, v, if lo == hi { lo } else { rng.random_range(lo..=hi) }))
        .collect();
    Ok(Graph::from_edges(n, weighted))
}

/// A connected small world together with the seed that produced it.
#[derive(Debug, Clone)]
pub struct GeneratedGraph {
    pub graph: Graph,
    pub seed_used: u64,
}

/// Regenerates with `seed + 1, seed + 2, ...` while the result is disconnected.
pub fn gen_small_world(params: &SmallWorld, seed: u64) -> Result<GeneratedGraph, SolveError> {
    for attempt in 0..MAX_REGENERATIONS {
        let s = seed.wrapping_add(attempt);
        let graph = small_world_once(params, s)?;
        if graph.is_connected() {
            if attempt > 0 {
                eprintln!("small world seed {seed} disconnected, regenerated with seed {s}");
            }
            return Ok(GeneratedGraph { graph, seed_used: s });
        }
    }
    Err(bad(format!("no connected small world within {MAX_REGENERATIONS} seeds from {seed}")))
}

/// Normal draw resampled until within two standard deviations and positive.
fn bounded_cost(model: &CostModel, rng: &mut ChaCha8Rng) -> f64 {
    if model.stddev == 0.0 {
        return model.mean;
    }
    let normal = Normal::new(model.mean, model.stddev).expect("valid cost model");
    loop {
        let x = normal.sample(rng);
        if (x - model.mean).abs() <= 2.0 * model.stddev && x > 0.0 {
            return x;
        }
    }
}

/// Random tiers for one site.
pub fn gen_tiers(
    cost: &CostModel,
    prob: &ProbModel,
    tier_count: (usize, usize),
    rng: &mut ChaCha8Rng,
) -> Vec<(f64, f64)> {
    let count = rng.random_range(tier_count.0..=tier_count.1);
    let mut costs: Vec<f64> = (0..count).map(|_| bounded_cost(cost, rng)).collect();
    costs.sort_by(f64::total_cmp);
    costs.dedup();
    let normal = Normal::new(prob.mean, prob.stddev.max(0.0)).expect("valid probability model");
    let mut probs: Vec<f64> = costs.iter().map(|_| normal.sample(rng).clamp(0.001, 0.999)).collect();
    let total: f64 = probs.iter().sum();
    if total > 1.0 {
        probs.iter_mut().for_each(|p| *p *= 0.999 / total);
    }
    costs.into_iter().zip(probs).collect()
}

/// Puts random tiers on every vertex except the start.
pub fn gen_costs_and_probs(
    graph: &Graph,
    start: VertexId,
    labels: Option<Vec<u64>>,
    config: &GeneratorConfig,
    seed: u64,
) -> Result<Instance, SolveError> {
    let (lo, hi) = config.tier_count_range;
    if lo == 0 || lo > hi {
        return Err(bad(format!("tier count range {lo}..={hi} must be nonempty and start at 1 or more")));
    }
    if config.cost_model.stddev < 0.0 || config.prob_model.stddev < 0.0 {
        return Err(bad("standard deviations must be nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut builder = InstanceBuilder::new(graph.vertex_count()).start(start).max_tiers(hi);
    if let Some(labels) = labels {
        builder = builder.labels(labels);
    }
    for e in graph.edges() {
        builder.add_edge(e.u, e.v, e.weight);
    }
    for v in 0..graph.vertex_count() {
        if v != start {
            builder.set_site(v, gen_tiers(&config.cost_model, &config.prob_model, (lo, hi), &mut rng));
        }
    }
    Ok(builder.build()?)
}

/// First `size` vertices of a breadth-first search from `center`.
pub fn ball(graph: &Graph, center: VertexId, size: usize) -> Vec<VertexId> {
    let mut seen = vec![false; graph.vertex_count()];
    let mut order = Vec::with_capacity(size);
    let mut queue = VecDeque::from([center]);
    seen[center] = true;
    while let Some(v) = queue.pop_front() {
        if order.len() == size {
            break;
        }
        order.push(v);
        for arc in graph.neighbors(v) {
            if !std::mem::replace(&mut seen[arc.to], true) {
                queue.push_back(arc.to);
            }
        }
    }
    order
}

/// Induced subgraph on `members` with `members[0]` mapped to vertex 0.
pub fn induced(graph: &Graph, members: &[VertexId]) -> Graph {
    let mut index = vec![usize::MAX; graph.vertex_count()];
    for (i, &v) in members.iter().enumerate() {
        index[v] = i;
    }
    let edges = graph
        .edges()
        .iter()
        .filter(|e| index[e.u] != usize::MAX && index[e.v] != usize::MAX)
        .map(|e| (index[e.u], index[e.v], e.weight));
    Graph::from_edges(members.len(), edges)
}

/// Full random instance for `seed`; the start is vertex 0.
pub fn generate_instance(config: &GeneratorConfig, seed: u64) -> Result<Instance, SolveError> {
    match &config.topology {
        Topology::SmallWorld(params) => {
            let g = gen_small_world(params, seed)?;
            gen_costs_and_probs(&g.graph, 0, None, config, seed)
        }
        Topology::File { graph, labels, ball_size } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let center = rng.random_range(0..graph.vertex_count());
            let members = ball(graph, center, ball_size.unwrap_or(graph.vertex_count()));
            let sub = induced(graph, &members);
            let sub_labels = members.iter().map(|&v| labels[v]).collect();
            gen_costs_and_probs(&sub, 0, Some(sub_labels), config, seed)
        }
    }
}
