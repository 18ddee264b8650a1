//! Reductions between problem forms.
//!
//! * Vertex splitting turns a multi-tier site `v` with tiers `c_1 < ... < c_k`
//!   into a zero-weight chain `u_1 - u_2 - ... - u_k`, where `u_1` takes `v`'s
//!   place in the graph and `u_i` holds the single tier `c_i` with the
//!   conditional probability `p_i / (1 - (p_1 + ... + p_{i-1}))`. Walking the
//!   chain out and back on first arrival reproduces the original failure
//!   probability exactly.
//! * A single-tier instance under budget `B` becomes a Deadline-TSP instance
//!   with prize `-ln(1 - p_v)` and deadline `B - c_v`.
//! * Prize rounding makes Deadline-TSP prizes integral.

use crate::dtsp::DtspInstance;
use crate::error::SolveError;
use crate::eval::prize_of;
use crate::graph::VertexId;
use crate::instance::{Instance, InstanceBuilder, Walk};
use crate::EPS;

/// A split instance together with the way back to the original.
#[derive(Debug, Clone)]
pub struct SingleCostInstance {
    instance: Instance,
    original: Instance,
    /// New vertex -> (original vertex, tier index).
    back_map: Vec<(VertexId, Option<usize>)>,
    /// Original vertex -> its chain `u_1..u_k` in the split graph.
    chains: Vec<Vec<VertexId>>,
}

impl SingleCostInstance {
    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn original(&self) -> &Instance {
        &self.original
    }

    pub fn back_map(&self) -> &[(VertexId, Option<usize>)] {
        &self.back_map
    }

    pub fn chain(&self, v: VertexId) -> &[VertexId] {
        &self.chains[v]
    }

    /// Canonical image of an original walk: on the first arrival at a site
    /// with `k >= 2` tiers, walk the chain out and back.
    pub fn expand_walk(&self, walk: &Walk) -> Walk {
        let mut seen = vec![false; self.original.vertex_count()];
        let mut vertices = Vec::with_capacity(walk.len());
        for &v in walk.vertices() {
            vertices.push(v);
            if !seen[v] {
                seen[v] = true;
                let chain = &self.chains[v];
                if chain.len() >= 2 {
                    vertices.extend(chain[1..].iter().copied());
                    vertices.extend(chain[..chain.len() - 1].iter().rev().copied());
                }
            }
        }
        Walk::new(&self.instance, vertices).expect("expansion follows split-graph edges")
    }

    /// Collapses chain excursions back onto the original vertices.
    ///
    /// Travel cost is always preserved. Success probability is preserved for
    /// walks that traverse each chain on their first arrival at `u_1` (every
    /// walk produced by [`expand_walk`](Self::expand_walk) or by an optimal
    /// solver); for other walks the original can only do better.
    pub fn map_walk_back(&self, walk: &Walk) -> Walk {
        let mut vertices: Vec<VertexId> = Vec::with_capacity(walk.len());
        for &u in walk.vertices() {
            let v = self.back_map[u].0;
            if vertices.last() != Some(&v) {
                vertices.push(v);
            }
        }
        Walk::new(&self.original, vertices).expect("chain collapse yields an original walk")
    }
}

/// Splits every multi-tier site into a zero-weight chain of single-tier sites.
pub fn to_single_cost(instance: &Instance) -> Result<SingleCostInstance, SolveError> {
    let n = instance.vertex_count();
    let mut back_map: Vec<(VertexId, Option<usize>)> = (0..n).map(|v| (v, None)).collect();
    let mut chains: Vec<Vec<VertexId>> = (0..n).map(|v| vec![v]).collect();
    let mut tiers_of: Vec<Option<(f64, f64)>> = vec![None; n];
    let mut chain_edges = Vec::new();

    for v in 0..n {
        let site = instance.site(v);
        let mut before = 0.0;
        for (i, tier) in site.tiers().iter().enumerate() {
            let remaining = 1.0 - before;
            if remaining <= EPS {
                return Err(SolveError::Degenerate { vertex: v, tier: i });
            }
            let conditional = (tier.prob / remaining).min(1.0);
            let u = if i == 0 {
                v
            } else {
                let u = back_map.len();
                back_map.push((v, Some(i)));
                tiers_of.push(None);
                chain_edges.push((*chains[v].last().unwrap(), u));
                chains[v].push(u);
                u
            };
            back_map[u].1 = Some(i);
            tiers_of[u] = Some((tier.cost, conditional));
            before += tier.prob;
        }
    }

    let total = back_map.len();
    let next_label = instance.labels().iter().max().map_or(0, |m| m + 1);
    let labels = (0..total)
        .map(|u| if u < n { instance.label(u) } else { next_label + (u - n) as u64 })
        .collect();
    let mut builder = InstanceBuilder::new(total)
        .start(instance.start())
        .labels(labels)
        .max_tiers(1)
        .allow_zero_weights();
    for e in instance.graph().edges() {
        builder.add_edge(e.u, e.v, e.weight);
    }
    for (a, b) in chain_edges {
        builder.add_edge(a, b, 0.0);
    }
    for (u, tier) in tiers_of.into_iter().enumerate() {
        if let Some(t) = tier {
            builder.set_site(u, [t]);
        }
    }
    let split = builder.build()?;
    Ok(SingleCostInstance { instance: split, original: instance.clone(), back_map, chains })
}

/// Deadline-TSP image of a single-tier instance under `budget`.
pub fn to_deadline_tsp(single: &SingleCostInstance, budget: f64) -> DtspInstance {
    let inst = single.instance();
    let n = inst.vertex_count();
    let mut prize = vec![0.0; n];
    let mut deadline = vec![budget; n];
    for v in 0..n {
        if v == inst.start() {
            continue;
        }
        if let Some(t) = inst.site(v).tiers().first() {
            prize[v] = prize_of(t.prob);
            deadline[v] = budget - t.cost;
        }
    }
    DtspInstance::new(inst.graph().clone(), inst.start(), prize, deadline)
}

/// Integral prizes plus the lower-bound constant observed on the input.
#[derive(Debug, Clone)]
pub struct RoundedPrizes {
    pub instance: DtspInstance,
    /// `1 / min positive prize`, i.e. the smallest `c` with every positive
    /// prize at least `1/c`. `None` when no prize is positive.
    pub lower_bound_c: Option<f64>,
}

/// Rounds prizes: `floor(x)` for `x >= 1`, `1` for `0 < x < 1`. Zero prizes stay zero.
pub fn round_prizes(dtsp: &DtspInstance) -> RoundedPrizes {
    let mut min_positive = f64::INFINITY;
    let prizes: Vec<f64> = (0..dtsp.vertex_count())
        .map(|v| {
            let x = dtsp.prize(v);
            if x > 0.0 {
                min_positive = min_positive.min(x);
            }
            round_prize(x)
        })
        .collect();
    RoundedPrizes {
        instance: dtsp.with_prizes(prizes),
        lower_bound_c: min_positive.is_finite().then(|| 1.0 / min_positive),
    }
}

pub fn round_prize(x: f64) -> f64 {
    if x >= 1.0 {
        x.floor()
    } else if x > 0.0 {
        1.0
    } else {
        0.0
    }
}
