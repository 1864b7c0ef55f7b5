//! Temporal graph data model: a fixed vertex set whose edges carry discrete
//! time stamps, partitioned into layers `1..=lifetime`.
//!
//! Graphs are built once (via [`TemporalGraph::new`] plus
//! [`TemporalGraph::add_time_edge`], or by parsing) and treated as immutable
//! afterwards, so they can be shared freely across solver threads. Layers with
//! no edges ("trivial" layers) are implicit: only the lifetime and the time
//! edge set are stored, which keeps heavily padded graphs cheap.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Index into a graph's vertex table.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One occurrence of an undirected edge at one time step. Endpoints are
/// normalized so that `u < v`; time stamps are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeEdge {
    u: VertexId,
    v: VertexId,
    t: u32,
}

impl TimeEdge {
    pub fn new(a: VertexId, b: VertexId, t: u32) -> Result<Self, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop { vertex: a, time: t });
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Ok(TimeEdge { u, v, t })
    }

    /// Raw constructor for ordering keys; not exported, may violate `u < v`.
    fn key(u: u32, v: u32, t: u32) -> Self {
        TimeEdge {
            u: VertexId(u),
            v: VertexId(v),
            t,
        }
    }

    pub fn u(self) -> VertexId {
        self.u
    }

    pub fn v(self) -> VertexId {
        self.v
    }

    pub fn time(self) -> u32 {
        self.t
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }
}

// Ordered by (time, u, v) so that a layer is a contiguous range.
impl Ord for TimeEdge {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.t, self.u, self.v).cmp(&(other.t, other.u, other.v))
    }
}

impl PartialOrd for TimeEdge {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TimeEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.u, self.v, self.t)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("lifetime must be at least 1")]
    ZeroLifetime,
    #[error("self-loop at vertex {vertex} (time {time})")]
    SelfLoop { vertex: VertexId, time: u32 },
    #[error("time stamp {time} outside 1..={lifetime}")]
    TimeOutOfRange { time: u32, lifetime: u32 },
    #[error("vertex {vertex} outside 0..{count}")]
    UnknownVertex { vertex: VertexId, count: usize },
    #[error("duplicate time edge {edge}")]
    DuplicateTimeEdge { edge: TimeEdge },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid graph JSON: {0}")]
    Json(String),
}

/// An undirected temporal graph: `vertex_count` vertices with display labels,
/// a lifetime, and a set of time edges. A vertex pair may carry several time
/// stamps, but each (pair, stamp) combination is unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    labels: Vec<String>,
    lifetime: u32,
    edges: BTreeSet<TimeEdge>,
}

impl TemporalGraph {
    pub fn new(vertex_count: usize, lifetime: u32) -> Result<Self, GraphError> {
        if lifetime == 0 {
            return Err(GraphError::ZeroLifetime);
        }
        Ok(TemporalGraph {
            labels: (0..vertex_count).map(|i| i.to_string()).collect(),
            lifetime,
            edges: BTreeSet::new(),
        })
    }

    /// Builds a graph from `(u, v, t)` triples in one go.
    pub fn with_edges<I>(vertex_count: usize, lifetime: u32, triples: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32, u32)>,
    {
        let mut g = TemporalGraph::new(vertex_count, lifetime)?;
        for (u, v, t) in triples {
            g.add_time_edge(u, v, t)?;
        }
        Ok(g)
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v.index() >= self.labels.len() {
            return Err(GraphError::UnknownVertex {
                vertex: v,
                count: self.labels.len(),
            });
        }
        Ok(())
    }

    /// Construction-time mutation; graphs are treated as frozen once handed
    /// to solvers.
    pub fn add_time_edge(&mut self, u: u32, v: u32, t: u32) -> Result<(), GraphError> {
        let (u, v) = (VertexId(u), VertexId(v));
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if t == 0 || t > self.lifetime {
            return Err(GraphError::TimeOutOfRange {
                time: t,
                lifetime: self.lifetime,
            });
        }
        let edge = TimeEdge::new(u, v, t)?;
        if !self.edges.insert(edge) {
            return Err(GraphError::DuplicateTimeEdge { edge });
        }
        Ok(())
    }

    pub fn set_label(&mut self, v: VertexId, label: impl Into<String>) -> Result<(), GraphError> {
        self.check_vertex(v)?;
        self.labels[v.index()] = label.into();
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn lifetime(&self) -> u32 {
        self.lifetime
    }

    pub fn time_edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All time edges in ascending (time, u, v) order.
    pub fn time_edges(&self) -> impl Iterator<Item = TimeEdge> + '_ {
        self.edges.iter().copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.labels.len() as u32).map(VertexId)
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.index() < self.labels.len()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Membership test for the undirected time edge `{a, b}` at time `t`.
    pub fn contains_time_edge(&self, a: VertexId, b: VertexId, t: u32) -> bool {
        if a == b {
            return false;
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        self.edges.contains(&TimeEdge { u, v, t })
    }

    /// The edge set of layer `i` as normalized vertex pairs. Layers without
    /// edges yield the empty set.
    pub fn layer(&self, i: u32) -> Result<BTreeSet<(VertexId, VertexId)>, GraphError> {
        if i == 0 || i > self.lifetime {
            return Err(GraphError::TimeOutOfRange {
                time: i,
                lifetime: self.lifetime,
            });
        }
        let lo = TimeEdge::key(0, 0, i);
        let hi = TimeEdge::key(u32::MAX, u32::MAX, i);
        Ok(self
            .edges
            .range(lo..=hi)
            .map(|e| (e.u, e.v))
            .collect())
    }

    /// Deletes the vertices in `removed`, reindexing the survivors to keep
    /// ids dense. Returns the new graph together with the id mapping so that
    /// certificates can be translated back. Exactly the time edges with both
    /// endpoints outside `removed` survive; the lifetime is unchanged.
    pub fn remove_vertices(
        &self,
        removed: &BTreeSet<VertexId>,
    ) -> Result<(TemporalGraph, VertexMapping), GraphError> {
        for &v in removed {
            self.check_vertex(v)?;
        }
        let mut old_to_new = vec![None; self.labels.len()];
        let mut new_to_old = Vec::with_capacity(self.labels.len() - removed.len());
        let mut labels = Vec::with_capacity(new_to_old.capacity());
        for v in self.vertices() {
            if !removed.contains(&v) {
                old_to_new[v.index()] = Some(VertexId(new_to_old.len() as u32));
                new_to_old.push(v);
                labels.push(self.labels[v.index()].clone());
            }
        }
        let mapping = VertexMapping {
            old_to_new,
            new_to_old,
        };
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                let u = mapping.to_new(e.u)?;
                let v = mapping.to_new(e.v)?;
                Some(TimeEdge { u, v, t: e.t })
            })
            .collect();
        let g = TemporalGraph {
            labels,
            lifetime: self.lifetime,
            edges,
        };
        Ok((g, mapping))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphJson::from(self)).expect("graph serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let raw: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        raw.try_into()
    }
}

/// Old-id/new-id translation produced by [`TemporalGraph::remove_vertices`].
#[derive(Debug, Clone)]
pub struct VertexMapping {
    old_to_new: Vec<Option<VertexId>>,
    new_to_old: Vec<VertexId>,
}

impl VertexMapping {
    /// New id of a surviving vertex, or `None` if it was deleted.
    pub fn to_new(&self, old: VertexId) -> Option<VertexId> {
        self.old_to_new.get(old.index()).copied().flatten()
    }

    pub fn to_old(&self, new: VertexId) -> VertexId {
        self.new_to_old[new.index()]
    }
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// Parses the line-oriented text format:
///
/// ```text
/// # comment
/// tg <n_vertices> <lifetime> <n_time_edges>
/// label <id> <string>
/// <u> <v> <t>
/// ```
///
/// Label lines are optional and must precede the edge lines. Vertex ids are
/// 0-based, time stamps 1-based.
pub fn parse_graph(text: &str) -> Result<TemporalGraph, GraphError> {
    let mut graph: Option<TemporalGraph> = None;
    let mut header_line = 0usize;
    let mut declared_edges = 0usize;
    let mut seen_edges = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| GraphError::Parse {
            line: lineno,
            message,
        };
        match graph {
            None => {
                if fields.len() != 4 || fields[0] != "tg" {
                    return Err(err(format!(
                        "expected header `tg <n> <lifetime> <m>`, found `{line}`"
                    )));
                }
                let n: usize = parse_field(fields[1], lineno, "vertex count")?;
                let lifetime: u32 = parse_field(fields[2], lineno, "lifetime")?;
                let m: usize = parse_field(fields[3], lineno, "edge count")?;
                graph = Some(TemporalGraph::new(n, lifetime).map_err(|e| err(e.to_string()))?);
                header_line = lineno;
                declared_edges = m;
            }
            Some(ref mut g) => {
                if fields[0] == "label" {
                    if seen_edges > 0 {
                        return Err(err("label line after edge lines".into()));
                    }
                    if fields.len() < 3 {
                        return Err(err("expected `label <id> <string>`".into()));
                    }
                    let id: u32 = parse_field(fields[1], lineno, "vertex id")?;
                    let start = line.find(fields[1]).expect("field present") + fields[1].len();
                    let label = line[start..].trim().to_string();
                    g.set_label(VertexId(id), label)
                        .map_err(|e| err(e.to_string()))?;
                } else {
                    if fields.len() != 3 {
                        return Err(err(format!("expected `<u> <v> <t>`, found `{line}`")));
                    }
                    let u: u32 = parse_field(fields[0], lineno, "vertex id")?;
                    let v: u32 = parse_field(fields[1], lineno, "vertex id")?;
                    let t: u32 = parse_field(fields[2], lineno, "time stamp")?;
                    g.add_time_edge(u, v, t).map_err(|e| err(e.to_string()))?;
                    seen_edges += 1;
                }
            }
        }
    }

    let graph = graph.ok_or(GraphError::Parse {
        line: 0,
        message: "missing `tg` header".into(),
    })?;
    if seen_edges != declared_edges {
        return Err(GraphError::Parse {
            line: header_line,
            message: format!("header declares {declared_edges} time edges, found {seen_edges}"),
        });
    }
    Ok(graph)
}

fn parse_field<T: FromStr>(field: &str, line: usize, what: &str) -> Result<T, GraphError> {
    field.parse().map_err(|_| GraphError::Parse {
        line,
        message: format!("invalid {what} `{field}`"),
    })
}

/// Renders the text format; `parse_graph` of the output reproduces the graph.
pub fn write_graph(g: &TemporalGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "tg {} {} {}\n",
        g.vertex_count(),
        g.lifetime(),
        g.time_edge_count()
    ));
    for v in g.vertices() {
        let label = g.label(v);
        if label != v.to_string() {
            out.push_str(&format!("label {} {}\n", v, label));
        }
    }
    for e in g.time_edges() {
        out.push_str(&format!("{} {} {}\n", e.u(), e.v(), e.time()));
    }
    out
}

impl fmt::Display for TemporalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_graph(self))
    }
}

impl FromStr for TemporalGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_graph(s)
    }
}

// ---------------------------------------------------------------------------
// JSON mirror
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertex_count: usize,
    lifetime: u32,
    #[serde(default)]
    labels: Vec<String>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    u: u32,
    v: u32,
    t: u32,
}

impl From<&TemporalGraph> for GraphJson {
    fn from(g: &TemporalGraph) -> Self {
        GraphJson {
            vertex_count: g.vertex_count(),
            lifetime: g.lifetime(),
            labels: g.labels.clone(),
            edges: g
                .time_edges()
                .map(|e| EdgeJson {
                    u: e.u().0,
                    v: e.v().0,
                    t: e.time(),
                })
                .collect(),
        }
    }
}

impl TryFrom<GraphJson> for TemporalGraph {
    type Error = GraphError;

    fn try_from(raw: GraphJson) -> Result<Self, GraphError> {
        let mut g = TemporalGraph::new(raw.vertex_count, raw.lifetime)?;
        if !raw.labels.is_empty() {
            if raw.labels.len() != raw.vertex_count {
                return Err(GraphError::Json(format!(
                    "{} labels for {} vertices",
                    raw.labels.len(),
                    raw.vertex_count
                )));
            }
            for (i, label) in raw.labels.into_iter().enumerate() {
                g.set_label(VertexId(i as u32), label)?;
            }
        }
        for e in raw.edges {
            g.add_time_edge(e.u, e.v, e.t)?;
        }
        Ok(g)
    }
}

/// Per-layer view and the flat time-edge view describe the same graph;
/// this map materializes the former for callers that want it.
pub fn layers(g: &TemporalGraph) -> BTreeMap<u32, BTreeSet<(VertexId, VertexId)>> {
    let mut map: BTreeMap<u32, BTreeSet<(VertexId, VertexId)>> = BTreeMap::new();
    for e in g.time_edges() {
        map.entry(e.time()).or_default().insert(e.endpoints());
    }
    map
}
