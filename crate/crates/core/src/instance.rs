//! Search instances: a graph, a cost distribution per site, and a start vertex.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::InstanceError;
use crate::graph::{Graph, VertexId};
use crate::EPS;

/// Default cap on the number of distinct cost tiers per site.
pub const DEFAULT_MAX_TIERS: usize = 64;

/// One point of a site's cost distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tier {
    pub cost: f64,
    pub prob: f64,
}

impl Tier {
    pub fn new(cost: f64, prob: f64) -> Self {
        Tier { cost, prob }
    }
}

/// The price distribution at one vertex. Tiers are sorted by strictly
/// increasing cost; the residual `1 - total_mass()` is the probability that
/// the item is not available at all.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Site {
    tiers: Vec<Tier>,
}

impl Site {
    pub fn empty() -> Self {
        Site::default()
    }

    /// Sorts tiers, merges equal costs by summing their probabilities and
    /// validates the result. `label` is only used in error messages.
    pub fn new(mut tiers: Vec<Tier>, label: u64) -> Result<Self, InstanceError> {
        for t in &tiers {
            if !t.cost.is_finite() || t.cost < 0.0 {
                return Err(InstanceError::InvalidTier {
                    vertex: label,
                    message: format!("cost {} must be a nonnegative number", t.cost),
                });
            }
            if !t.prob.is_finite() || !(0.0..=1.0).contains(&t.prob) {
                return Err(InstanceError::InvalidTier {
                    vertex: label,
                    message: format!("probability {} must lie in [0, 1]", t.prob),
                });
            }
        }
        tiers.sort_by(|a, b| a.cost.total_cmp(&b.cost));
        let mut merged: Vec<Tier> = Vec::with_capacity(tiers.len());
        for t in tiers {
            match merged.last_mut() {
                Some(last) if (last.cost - t.cost).abs() <= EPS => last.prob += t.prob,
                _ => merged.push(t),
            }
        }
        let total: f64 = merged.iter().map(|t| t.prob).sum();
        if total > 1.0 + EPS {
            return Err(InstanceError::ProbabilityMass { vertex: label, total });
        }
        Ok(Site { tiers: merged })
    }

    pub fn tiers(&self) -> &[Tier] {
        &self.tiers
    }

    pub fn is_empty(&self) -> bool {
        self.tiers.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.tiers.iter().map(|t| t.prob).sum::<f64>().min(1.0)
    }

    /// Cumulative probability of tiers `0..=index`.
    pub fn cumulative(&self, index: usize) -> f64 {
        self.tiers[..=index].iter().map(|t| t.prob).sum::<f64>().min(1.0)
    }

    /// Number of tiers affordable with `remaining` budget.
    pub fn affordable_count(&self, remaining: f64) -> usize {
        self.tiers.partition_point(|t| t.cost <= remaining + EPS)
    }

    /// Probability of buying the item when arriving with `remaining` budget.
    pub fn mass_within(&self, remaining: f64) -> f64 {
        let k = self.affordable_count(remaining);
        if k == 0 {
            0.0
        } else {
            self.cumulative(k - 1)
        }
    }

    /// Cheapest cost among tiers with positive probability.
    pub fn cheapest_useful_cost(&self) -> Option<f64> {
        self.tiers.iter().find(|t| t.prob > 0.0).map(|t| t.cost)
    }
}

/// An immutable search instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    graph: Graph,
    sites: Vec<Site>,
    start: VertexId,
    labels: Vec<u64>,
    label_index: HashMap<u64, VertexId>,
}

impl Instance {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn site(&self, v: VertexId) -> &Site {
        &self.sites[v]
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn vertex_count(&self) -> usize {
        self.sites.len()
    }

    /// External id of a vertex (the id used in instance files).
    pub fn label(&self, v: VertexId) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn index_of(&self, label: u64) -> Option<VertexId> {
        self.label_index.get(&label).copied()
    }

    /// Success probability of visiting every reachable site with unlimited budget.
    pub fn available_mass(&self) -> f64 {
        let failure: f64 = self
            .graph
            .component(self.start)
            .into_iter()
            .map(|v| 1.0 - self.sites[v].total_mass())
            .product();
        1.0 - failure
    }
}

/// Assembles and validates an [`Instance`].
#[derive(Debug, Clone)]
pub struct InstanceBuilder {
    n: usize,
    edges: Vec<(VertexId, VertexId, f64)>,
    tiers: Vec<Vec<Tier>>,
    start: Option<VertexId>,
    labels: Option<Vec<u64>>,
    max_tiers: usize,
    allow_zero_weights: bool,
}

impl InstanceBuilder {
    pub fn new(n: usize) -> Self {
        InstanceBuilder {
            n,
            edges: Vec::new(),
            tiers: vec![Vec::new(); n],
            start: None,
            labels: None,
            max_tiers: DEFAULT_MAX_TIERS,
            allow_zero_weights: false,
        }
    }

    pub fn edge(mut self, u: VertexId, v: VertexId, w: f64) -> Self {
        self.edges.push((u, v, w));
        self
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, w: f64) {
        self.edges.push((u, v, w));
    }

    pub fn site(mut self, v: VertexId, tiers: impl IntoIterator<Item = (f64, f64)>) -> Self {
        self.set_site(v, tiers);
        self
    }

    pub fn set_site(&mut self, v: VertexId, tiers: impl IntoIterator<Item = (f64, f64)>) {
        if v >= self.tiers.len() {
            self.tiers.resize(v + 1, Vec::new());
        }
        self.tiers[v] = tiers.into_iter().map(|(c, p)| Tier::new(c, p)).collect();
    }

    pub fn start(mut self, v: VertexId) -> Self {
        self.start = Some(v);
        self
    }

    pub fn labels(mut self, labels: Vec<u64>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn max_tiers(mut self, max: usize) -> Self {
        self.max_tiers = max;
        self
    }

    /// Permits zero-weight edges, which the vertex-splitting reduction needs
    /// for its chain edges. Loaded instances always require positive weights.
    pub fn allow_zero_weights(mut self) -> Self {
        self.allow_zero_weights = true;
        self
    }

    pub fn build(self) -> Result<Instance, InstanceError> {
        let n = self.n;
        if self.tiers.len() > n {
            return Err(InstanceError::VertexOutOfRange(self.tiers.len() - 1));
        }
        let labels = self.labels.unwrap_or_else(|| (0..n as u64).collect());
        if labels.len() != n {
            return Err(InstanceError::VertexOutOfRange(labels.len()));
        }
        for (line, &(u, v, w)) in self.edges.iter().enumerate() {
            if u >= n {
                return Err(InstanceError::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(InstanceError::VertexOutOfRange(v));
            }
            if u == v {
                return Err(InstanceError::SelfLoop { line: line + 1, vertex: labels[u] });
            }
            let bad = !w.is_finite() || w < 0.0 || (w == 0.0 && !self.allow_zero_weights);
            if bad {
                return Err(InstanceError::NonPositiveWeight { line: line + 1, weight: w });
            }
        }
        let start = self.start.ok_or(InstanceError::MissingStart)?;
        if start >= n {
            return Err(InstanceError::VertexOutOfRange(start));
        }
        let mut sites = Vec::with_capacity(n);
        for (v, tiers) in self.tiers.into_iter().enumerate() {
            let site = Site::new(tiers, labels[v])?;
            if site.tiers().len() > self.max_tiers {
                return Err(InstanceError::TooManyTiers {
                    vertex: labels[v],
                    count: site.tiers().len(),
                    max: self.max_tiers,
                });
            }
            sites.push(site);
        }
        if !sites[start].is_empty() {
            return Err(InstanceError::StartHasTiers { vertex: labels[start] });
        }
        let label_index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        Ok(Instance {
            graph: Graph::from_edges(n, self.edges),
            sites,
            start,
            labels,
            label_index,
        })
    }
}

/// A walk from the start vertex with cumulative travel costs.
///
/// `prefix_cost()[j]` is the travel cost spent before arriving at position `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Walk {
    vertices: Vec<VertexId>,
    prefix_cost: Vec<f64>,
}

impl Walk {
    /// The walk that never leaves the start vertex.
    pub fn trivial(instance: &Instance) -> Self {
        Walk { vertices: vec![instance.start()], prefix_cost: vec![0.0] }
    }

    pub fn new(instance: &Instance, vertices: Vec<VertexId>) -> Result<Self, InstanceError> {
        match vertices.first() {
            Some(&v) if v == instance.start() => {}
            _ => return Err(InstanceError::WalkStart),
        }
        let mut walk = Walk::trivial(instance);
        for &v in &vertices[1..] {
            walk.push(instance, v)?;
        }
        Ok(walk)
    }

    /// Builds a walk from external vertex labels.
    pub fn from_labels(instance: &Instance, labels: &[u64]) -> Result<Self, InstanceError> {
        let vertices = labels
            .iter()
            .map(|&l| instance.index_of(l).ok_or(InstanceError::UnknownVertex { line: 0, vertex: l }))
            .collect::<Result<Vec<_>, _>>()?;
        Walk::new(instance, vertices)
    }

    pub fn push(&mut self, instance: &Instance, v: VertexId) -> Result<(), InstanceError> {
        let last = self.last();
        if v >= instance.vertex_count() {
            return Err(InstanceError::VertexOutOfRange(v));
        }
        let w = instance
            .graph()
            .edge_weight(last, v)
            .ok_or(InstanceError::NotAdjacent { from: last, to: v })?;
        self.vertices.push(v);
        self.prefix_cost.push(self.travel_cost() + w);
        Ok(())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn prefix_cost(&self) -> &[f64] {
        &self.prefix_cost
    }

    pub fn last(&self) -> VertexId {
        *self.vertices.last().expect("walks are never empty")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of edges traversed.
    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn travel_cost(&self) -> f64 {
        *self.prefix_cost.last().expect("walks are never empty")
    }

    pub fn labels(&self, instance: &Instance) -> Vec<u64> {
        self.vertices.iter().map(|&v| instance.label(v)).collect()
    }
}
