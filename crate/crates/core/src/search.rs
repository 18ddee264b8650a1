//! Bookkeeping shared by the tree searches: limits, status flags, traces and
//! a lazily filled distance table.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchLimits {
    pub max_expansions: u64,
    pub time_limit: Option<Duration>,
    /// Instances larger than this are refused outright.
    pub max_vertices: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_expansions: 10_000_000, time_limit: None, max_vertices: 4096 }
    }
}

impl SearchLimits {
    pub fn expansions(max_expansions: u64) -> Self {
        SearchLimits { max_expansions, ..Default::default() }
    }
}

/// How a returned solution should be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SolveStatus {
    /// The search space was exhausted.
    Optimal,
    /// The search stopped at a limit; the best incumbent is returned.
    LimitExceeded,
    /// Produced by a method without an optimality guarantee.
    Heuristic,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "OPTIMAL",
            SolveStatus::LimitExceeded => "LIMIT_EXCEEDED",
            SolveStatus::Heuristic => "HEURISTIC",
        }
    }
}

/// One trace record, serialised as a JSON line by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Expand { expansions: u64, depth: usize, spent: f64 },
    Incumbent { expansions: u64, value: f64, walk: Vec<VertexId> },
}

/// Counter and clock checked by every search loop.
#[derive(Debug)]
pub(crate) struct Budget {
    limits: SearchLimits,
    started: Instant,
    pub expansions: u64,
    pub aborted: bool,
}

impl Budget {
    pub fn new(limits: SearchLimits) -> Self {
        Budget { limits, started: Instant::now(), expansions: 0, aborted: false }
    }

    /// Counts one expansion; returns `false` once a limit is hit.
    pub fn tick(&mut self) -> bool {
        if self.aborted {
            return false;
        }
        self.expansions += 1;
        if self.expansions > self.limits.max_expansions {
            self.aborted = true;
        } else if let Some(limit) = self.limits.time_limit {
            if self.expansions.is_multiple_of(1024) && self.started.elapsed() > limit {
                self.aborted = true;
            }
        }
        !self.aborted
    }

    pub fn status(&self) -> SolveStatus {
        if self.aborted {
            SolveStatus::LimitExceeded
        } else {
            SolveStatus::Optimal
        }
    }
}

/// All-pairs distances computed one source at a time on demand.
#[derive(Debug)]
pub(crate) struct DistanceTable<'g> {
    graph: &'g Graph,
    rows: Vec<Option<Vec<f64>>>,
}

impl<'g> DistanceTable<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        DistanceTable { graph, rows: vec![None; graph.vertex_count()] }
    }

    pub fn row(&mut self, source: VertexId) -> &[f64] {
        let graph = self.graph;
        self.rows[source].get_or_insert_with(|| graph.distances_from(source))
    }
}

/// Marks the vertices visited since the walk last reached a new vertex.
/// Returning to one of them closes a cycle that collected nothing, and such
/// walks are dominated by the walk with the cycle removed.
#[derive(Debug)]
pub(crate) struct Segment {
    marked: Vec<bool>,
    members: Vec<VertexId>,
}

impl Segment {
    pub fn new(n: usize, start: VertexId) -> Self {
        let mut marked = vec![false; n];
        marked[start] = true;
        Segment { marked, members: vec![start] }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.marked[v]
    }

    /// Enters `v`. Returns the token needed by [`leave`](Self::leave).
    pub fn enter(&mut self, v: VertexId, is_new: bool) -> Option<Vec<VertexId>> {
        if is_new {
            let old = std::mem::replace(&mut self.members, vec![v]);
            for &u in &old {
                self.marked[u] = false;
            }
            self.marked[v] = true;
            Some(old)
        } else {
            self.marked[v] = true;
            self.members.push(v);
            None
        }
    }

    pub fn leave(&mut self, token: Option<Vec<VertexId>>) {
        match token {
            Some(old) => {
                for &u in &self.members {
                    self.marked[u] = false;
                }
                for &u in &old {
                    self.marked[u] = true;
                }
                self.members = old;
            }
            None => {
                let v = self.members.pop().expect("segment underflow");
                self.marked[v] = false;
            }
        }
    }
}
