//! Undirected weighted graphs and the shortest-path queries the planners share.
//!
//! Adjacency lists are kept sorted by neighbour id so every traversal in the
//! crate is deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: f64,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// One entry of an adjacency list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub to: VertexId,
    pub weight: f64,
    pub edge: EdgeId,
}

/// Which vertices a restricted path may pass through.
#[derive(Debug, Clone, Copy)]
pub enum Allowed<'a> {
    All,
    /// Indexed by vertex id; `true` marks a vertex usable as an interior vertex.
    Only(&'a [bool]),
}

impl Allowed<'_> {
    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        match self {
            Allowed::All => true,
            Allowed::Only(mask) => mask.get(v).copied().unwrap_or(false),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Graph {
    adj: Vec<Vec<Arc>>,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Parallel edges collapse to the minimum
    /// weight. Callers are responsible for rejecting self-loops and invalid
    /// weights; such edges are skipped here.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId, f64)>) -> Self {
        let mut best: std::collections::BTreeMap<(VertexId, VertexId), f64> = Default::default();
        for (a, b, w) in edges {
            if a == b || a >= n || b >= n || !w.is_finite() || w < 0.0 {
                continue;
            }
            let key = (a.min(b), a.max(b));
            best.entry(key)
                .and_modify(|cur| {
                    if w < *cur {
                        *cur = w
                    }
                })
                .or_insert(w);
        }
        let mut adj = vec![Vec::new(); n];
        let mut out = Vec::with_capacity(best.len());
        for (id, ((u, v), weight)) in best.into_iter().enumerate() {
            out.push(Edge { u, v, weight });
            adj[u].push(Arc { to: v, weight, edge: id });
            adj[v].push(Arc { to: u, weight, edge: id });
        }
        for list in &mut adj {
            list.sort_by_key(|a| a.to);
        }
        Graph { adj, edges: out }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn neighbors(&self, v: VertexId) -> &[Arc] {
        &self.adj[v]
    }

    pub fn arc(&self, u: VertexId, v: VertexId) -> Option<&Arc> {
        let list = self.adj.get(u)?;
        list.binary_search_by_key(&v, |a| a.to).ok().map(|i| &list[i])
    }

    pub fn edge_weight(&self, u: VertexId, v: VertexId) -> Option<f64> {
        self.arc(u, v).map(|a| a.weight)
    }

    /// Single-source shortest distances (`f64::INFINITY` when unreachable).
    pub fn distances_from(&self, source: VertexId) -> Vec<f64> {
        self.shortest_path_tree(source, Allowed::All).dist
    }

    /// Dijkstra from `source` where only vertices in `allowed` are expanded.
    /// Vertices outside the set still receive labels, so each label is the
    /// length of the best path whose interior lies in `allowed`.
    pub fn shortest_path_tree(&self, source: VertexId, allowed: Allowed<'_>) -> PathTree {
        let n = self.vertex_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(HeapEntry { dist: 0.0, vertex: source });
        while let Some(HeapEntry { dist: d, vertex: u }) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            if u != source && !allowed.contains(u) {
                continue;
            }
            for arc in &self.adj[u] {
                let nd = d + arc.weight;
                if nd < dist[arc.to] {
                    dist[arc.to] = nd;
                    pred[arc.to] = Some((u, arc.edge));
                    heap.push(HeapEntry { dist: nd, vertex: arc.to });
                }
            }
        }
        PathTree { source, dist, pred }
    }

    /// Shortest `source -> target` path whose interior vertices lie in
    /// `allowed`; the target itself is exempt. `None` when unreachable.
    pub fn restricted_shortest_path(
        &self,
        source: VertexId,
        target: VertexId,
        allowed: Allowed<'_>,
    ) -> Option<(f64, Vec<VertexId>)> {
        if source == target {
            return Some((0.0, vec![source]));
        }
        let tree = self.shortest_path_tree(source, allowed);
        let path = tree.path_to(target)?;
        Some((tree.dist[target], path))
    }

    /// Neighbours of every vertex in `walk` (walk vertices included when
    /// they are adjacent to another walk vertex).
    pub fn frontier(&self, walk: &[VertexId]) -> BTreeSet<VertexId> {
        walk.iter()
            .flat_map(|&u| self.adj[u].iter().map(|a| a.to))
            .collect()
    }

    /// Vertices reachable from `source`, in ascending id order.
    pub fn component(&self, source: VertexId) -> Vec<VertexId> {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![source];
        seen[source] = true;
        while let Some(u) = stack.pop() {
            for a in &self.adj[u] {
                if !seen[a.to] {
                    seen[a.to] = true;
                    stack.push(a.to);
                }
            }
        }
        (0..seen.len()).filter(|&v| seen[v]).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.component(0).len() == self.vertex_count()
    }
}

/// Result of a single-source Dijkstra run.
#[derive(Debug, Clone)]
pub struct PathTree {
    pub source: VertexId,
    pub dist: Vec<f64>,
    pub pred: Vec<Option<(VertexId, EdgeId)>>,
}

impl PathTree {
    pub fn path_to(&self, target: VertexId) -> Option<Vec<VertexId>> {
        if !self.dist[target].is_finite() {
            return None;
        }
        let mut path = vec![target];
        let mut cur = target;
        while let Some((p, _)) = self.pred[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }

    pub fn edges_to(&self, target: VertexId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut cur = target;
        while let Some((p, e)) = self.pred[cur] {
            out.push(e);
            cur = p;
        }
        out.reverse();
        out
    }
}

#[derive(Debug, Clone, Copy)]
struct HeapEntry {
    dist: f64,
    vertex: VertexId,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_abc() -> Graph {
        Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)])
    }

    #[test]
    fn parallel_edges_keep_minimum() {
        let g = Graph::from_edges(2, [(0, 1, 2.0), (1, 0, 5.0)]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge_weight(0, 1), Some(2.0));
        assert_eq!(g.edge_weight(1, 0), Some(2.0));
    }

    #[test]
    fn same_source_and_target() {
        let g = path_abc();
        assert_eq!(g.restricted_shortest_path(1, 1, Allowed::All), Some((0.0, vec![1])));
    }

    #[test]
    fn restriction_through_allowed_interior() {
        let g = path_abc();
        let allowed = [true, true, false];
        assert_eq!(
            g.restricted_shortest_path(0, 2, Allowed::Only(&allowed)),
            Some((2.0, vec![0, 1, 2]))
        );
    }

    #[test]
    fn restriction_disconnects() {
        let g = path_abc();
        let allowed = [true, false, false];
        assert_eq!(g.restricted_shortest_path(0, 2, Allowed::Only(&allowed)), None);
    }

    #[test]
    fn restriction_prefers_longer_admissible_route() {
        // 0-1-3 is short but 1 is forbidden; 0-2-3 must be used.
        let g = Graph::from_edges(4, [(0, 1, 1.0), (1, 3, 1.0), (0, 2, 3.0), (2, 3, 3.0)]);
        let allowed = [true, false, true, false];
        assert_eq!(
            g.restricted_shortest_path(0, 3, Allowed::Only(&allowed)),
            Some((6.0, vec![0, 2, 3]))
        );
        assert_eq!(g.restricted_shortest_path(0, 3, Allowed::All), Some((2.0, vec![0, 1, 3])));
    }

    #[test]
    fn frontier_of_star_center() {
        let g = Graph::from_edges(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]);
        assert_eq!(g.frontier(&[0]), BTreeSet::from([1, 2, 3]));
    }

    #[test]
    fn frontier_of_isolated_vertex() {
        let g = Graph::from_edges(1, []);
        assert!(g.frontier(&[0]).is_empty());
    }

    #[test]
    fn frontier_of_triangle_includes_walk() {
        let g = Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        assert_eq!(g.frontier(&[0, 1]), BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn components() {
        let g = Graph::from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)]);
        assert_eq!(g.component(0), vec![0, 1]);
        assert!(!g.is_connected());
        assert!(path_abc().is_connected());
    }
}
