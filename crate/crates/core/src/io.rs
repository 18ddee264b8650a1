//! Text formats for instances.
//!
//! Graph file: one edge per line, `u v w`, with `#` starting a comment. A line
//! holding a single id declares an isolated vertex.
//!
//! Sites file: a `start: <id>` line plus one `v: c1@p1, c2@p2, ...` line per
//! site. Vertices without a line have no tiers.
//!
//! Ids are arbitrary nonnegative integers; internally they are renumbered to
//! dense indices in ascending id order and the original ids are kept as
//! labels for output.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::dtsp::DtspInstance;
use crate::error::InstanceError;
use crate::instance::{Instance, InstanceBuilder, Tier};

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

fn syntax(line: usize, message: impl Into<String>) -> InstanceError {
    InstanceError::Syntax { line, message: message.into() }
}

fn parse_id(token: &str, line: usize) -> Result<u64, InstanceError> {
    token
        .parse::<u64>()
        .map_err(|_| syntax(line, format!("invalid vertex id `{token}`")))
}

fn parse_real(token: &str, line: usize, what: &str) -> Result<f64, InstanceError> {
    token
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| syntax(line, format!("invalid {what} `{token}`")))
}

/// Parsed graph document, still in external ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EdgeList {
    pub vertices: BTreeSet<u64>,
    /// `(u, v, w, line)`
    pub edges: Vec<(u64, u64, f64, usize)>,
}

pub fn parse_edge_list(text: &str, allow_zero: bool) -> Result<EdgeList, InstanceError> {
    let mut out = EdgeList::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens.as_slice() {
            [v] => {
                out.vertices.insert(parse_id(v, line)?);
            }
            [u, v, w] => {
                let (u, v) = (parse_id(u, line)?, parse_id(v, line)?);
                let w = parse_real(w, line, "weight")?;
                if w < 0.0 || (w == 0.0 && !allow_zero) {
                    return Err(InstanceError::NonPositiveWeight { line, weight: w });
                }
                if u == v {
                    return Err(InstanceError::SelfLoop { line, vertex: u });
                }
                out.vertices.insert(u);
                out.vertices.insert(v);
                out.edges.push((u, v, w, line));
            }
            _ => return Err(syntax(line, "expected `u v w`")),
        }
    }
    Ok(out)
}

/// Parsed sites document.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SiteTable {
    pub start: Option<u64>,
    /// `id -> (tiers, line)`
    pub sites: BTreeMap<u64, (Vec<Tier>, usize)>,
}

pub fn parse_sites(text: &str) -> Result<SiteTable, InstanceError> {
    let mut out = SiteTable::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        let (head, rest) = body
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected `v: c@p, ...` or `start: <id>`"))?;
        let head = head.trim();
        let rest = rest.trim();
        if head == "start" {
            if out.start.is_some() {
                return Err(syntax(line, "duplicate start line"));
            }
            out.start = Some(parse_id(rest, line)?);
            continue;
        }
        let id = parse_id(head, line)?;
        let mut tiers = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (c, p) = item
                .split_once('@')
                .ok_or_else(|| syntax(line, format!("expected `cost@prob`, got `{item}`")))?;
            tiers.push(Tier::new(
                parse_real(c.trim(), line, "cost")?,
                parse_real(p.trim(), line, "probability")?,
            ));
        }
        if out.sites.insert(id, (tiers, line)).is_some() {
            return Err(syntax(line, format!("duplicate site line for vertex {id}")));
        }
    }
    Ok(out)
}

/// Parses the two documents into a validated instance.
pub fn load_instance(graph_text: &str, sites_text: &str) -> Result<Instance, InstanceError> {
    load_instance_with(graph_text, sites_text, false)
}

/// Like [`load_instance`], optionally accepting zero-weight edges (as written by the split transform).
pub fn load_instance_with(graph_text: &str, sites_text: &str, allow_zero: bool) -> Result<Instance, InstanceError> {
    let graph = parse_edge_list(graph_text, allow_zero)?;
    let table = parse_sites(sites_text)?;
    let labels: Vec<u64> = graph.vertices.iter().copied().collect();
    let index = |label: u64, line: usize| {
        labels
            .binary_search(&label)
            .map_err(|_| InstanceError::UnknownVertex { line, vertex: label })
    };
    let start_label = table.start.ok_or(InstanceError::MissingStart)?;
    let start = index(start_label, 0)?;
    let mut builder = InstanceBuilder::new(labels.len()).start(start);
    for &(u, v, w, line) in &graph.edges {
        builder.add_edge(index(u, line)?, index(v, line)?, w);
    }
    for (&id, (tiers, line)) in &table.sites {
        let v = index(id, *line)?;
        builder.set_site(v, tiers.iter().map(|t| (t.cost, t.prob)));
    }
    if allow_zero {
        builder = builder.allow_zero_weights();
    }
    builder.labels(labels).build()
}

pub fn load_instance_files(
    graph: impl AsRef<std::path::Path>,
    sites: impl AsRef<std::path::Path>,
    allow_zero: bool,
) -> anyhow::Result<Instance> {
    let g = std::fs::read_to_string(graph.as_ref())?;
    let s = std::fs::read_to_string(sites.as_ref())?;
    Ok(load_instance_with(&g, &s, allow_zero)?)
}

pub fn write_graph(instance: &Instance) -> String {
    let g = instance.graph();
    let mut out = String::new();
    let mut has_edge = vec![false; g.vertex_count()];
    for e in g.edges() {
        has_edge[e.u] = true;
        has_edge[e.v] = true;
        writeln!(out, "{} {} {}", instance.label(e.u), instance.label(e.v), e.weight).unwrap();
    }
    for (v, _) in has_edge.iter().enumerate().filter(|(_, &h)| !h) {
        writeln!(out, "{}", instance.label(v)).unwrap();
    }
    out
}

pub fn write_sites(instance: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "start: {}", instance.label(instance.start())).unwrap();
    for (v, site) in instance.sites().iter().enumerate() {
        if site.is_empty() {
            continue;
        }
        let tiers: Vec<String> = site.tiers().iter().map(|t| format!("{}@{}", t.cost, t.prob)).collect();
        writeln!(out, "{}: {}", instance.label(v), tiers.join(", ")).unwrap();
    }
    out
}

/// Writes a Deadline-TSP instance as a graph document (lengths may be zero)
/// and a table of `v: prize=<x>, deadline=<y>` lines headed by `root: <id>`.
pub fn write_dtsp(dtsp: &DtspInstance, labels: &[u64]) -> (String, String) {
    let mut graph = String::new();
    for e in dtsp.graph().edges() {
        writeln!(graph, "{} {} {}", labels[e.u], labels[e.v], e.weight).unwrap();
    }
    let mut table = String::new();
    writeln!(table, "root: {}", labels[dtsp.root()]).unwrap();
    for v in 0..dtsp.vertex_count() {
        writeln!(table, "{}: prize={}, deadline={}", labels[v], dtsp.prize(v), dtsp.deadline(v)).unwrap();
    }
    (graph, table)
}

/// Inverse of [`write_dtsp`]; returns the instance and the labels in index order.
pub fn load_dtsp(graph_text: &str, table_text: &str) -> Result<(DtspInstance, Vec<u64>), InstanceError> {
    let graph = parse_edge_list(graph_text, true)?;
    let mut root = None;
    let mut rows: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    for (i, raw) in table_text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        let (head, rest) = body.split_once(':').ok_or_else(|| syntax(line, "expected `v: prize=.., deadline=..`"))?;
        if head.trim() == "root" {
            root = Some(parse_id(rest.trim(), line)?);
            continue;
        }
        let id = parse_id(head.trim(), line)?;
        let (mut prize, mut deadline) = (None, None);
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_once('=') {
                Some(("prize", x)) => prize = Some(parse_real(x.trim(), line, "prize")?),
                Some(("deadline", x)) => deadline = Some(parse_real(x.trim(), line, "deadline")?),
                _ => return Err(syntax(line, format!("unexpected field `{item}`"))),
            }
        }
        let prize = prize.ok_or_else(|| syntax(line, "missing prize"))?;
        let deadline = deadline.ok_or_else(|| syntax(line, "missing deadline"))?;
        rows.insert(id, (prize, deadline));
    }
    let mut vertices = graph.vertices.clone();
    vertices.extend(rows.keys().copied());
    let labels: Vec<u64> = vertices.into_iter().collect();
    let index = |l: u64, line: usize| {
        labels.binary_search(&l).map_err(|_| InstanceError::UnknownVertex { line, vertex: l })
    };
    let root = index(root.ok_or(InstanceError::MissingStart)?, 0)?;
    let edges = graph
        .edges
        .iter()
        .map(|&(u, v, w, line)| Ok((index(u, line)?, index(v, line)?, w)))
        .collect::<Result<Vec<_>, InstanceError>>()?;
    let mut prize = vec![0.0; labels.len()];
    let mut deadline = vec![f64::NEG_INFINITY; labels.len()];
    for (&id, &(p, d)) in &rows {
        let v = index(id, 0)?;
        prize[v] = p;
        deadline[v] = d;
    }
    let g = crate::graph::Graph::from_edges(labels.len(), edges);
    Ok((DtspInstance::new(g, root, prize, deadline), labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_instance() {
        let inst = load_instance("0 1 2.0\n", "start: 0\n1: 3.0@0.5\n").unwrap();
        assert_eq!(inst.vertex_count(), 2);
        assert_eq!(inst.graph().edge_count(), 1);
        assert_eq!(inst.site(1).tiers(), &[Tier::new(3.0, 0.5)]);
        assert_eq!(inst.start(), 0);
    }

    #[test]
    fn duplicate_edges_collapse_to_minimum() {
        let inst = load_instance("0 1 2.0\n0 1 5.0\n", "start: 0\n").unwrap();
        assert_eq!(inst.graph().edge_count(), 1);
        assert_eq!(inst.graph().edge_weight(0, 1), Some(2.0));
    }

    #[test]
    fn excess_probability_mass() {
        let err = load_instance("0 1 2.0\n", "start: 0\n1: 1@0.6, 2@0.6\n").unwrap_err();
        assert!(err.to_string().contains("probability mass exceeds 1"), "{err}");
    }

    #[test]
    fn error_cases() {
        assert_eq!(
            load_instance("0 1 2\n1 2 x\n", "start: 0\n").unwrap_err(),
            InstanceError::Syntax { line: 2, message: "invalid weight `x`".into() }
        );
        assert_eq!(
            load_instance("0 1 0\n", "start: 0\n").unwrap_err(),
            InstanceError::NonPositiveWeight { line: 1, weight: 0.0 }
        );
        assert_eq!(load_instance("0 1 1\n", "1: 1@0.1\n").unwrap_err(), InstanceError::MissingStart);
        assert_eq!(
            load_instance("0 1 1\n", "start: 0\n\n7: 1@0.1\n").unwrap_err(),
            InstanceError::UnknownVertex { line: 3, vertex: 7 }
        );
        assert_eq!(
            load_instance("0 1 1\n", "start: 9\n").unwrap_err(),
            InstanceError::UnknownVertex { line: 0, vertex: 9 }
        );
    }

    #[test]
    fn sparse_ids_are_renumbered() {
        let inst = load_instance("# roads\n10 30 1.5 # trailing\n30 20 2\n", "start: 20\n30: 1@0.25\n").unwrap();
        assert_eq!(inst.labels(), &[10, 20, 30]);
        assert_eq!(inst.start(), 1);
        assert_eq!(inst.index_of(30), Some(2));
        assert_eq!(inst.site(2).tiers().len(), 1);
    }

    #[test]
    fn write_then_reload_is_identity() {
        let inst = load_instance(
            "3 4 1.25\n4 8 0.1\n3 8 7\n11\n",
            "start: 3\n4: 2@0.1, 1@0.3\n8: 0.5@0.05\n",
        )
        .unwrap();
        let again = load_instance(&write_graph(&inst), &write_sites(&inst)).unwrap();
        assert_eq!(inst, again);
    }
}
