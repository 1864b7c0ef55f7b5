//! Verification and search for waiting-time-restricted temporal walks and
//! paths.
//!
//! A delta-restless walk traverses time edges with non-decreasing stamps and
//! never waits longer than `delta` between consecutive edges; a restless path
//! additionally never revisits a vertex. Walk existence is decided in
//! polynomial time by breadth-first search over a successor relation on
//! directed time edges. Path existence is NP-hard, so [`find_path`] runs an
//! exact depth-first search with a node-expansion budget; running out of
//! budget is reported as a distinct outcome, never as a "no".

use crate::graph::{TemporalGraph, VertexId, VertexMapping};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

/// Default node-expansion cap for [`find_path`].
pub const DEFAULT_NODE_BUDGET: usize = 2_000_000;

/// One directed traversal of a time edge inside a walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WalkStep {
    #[serde(rename = "u")]
    pub from: VertexId,
    #[serde(rename = "v")]
    pub to: VertexId,
    #[serde(rename = "t")]
    pub time: u32,
}

impl WalkStep {
    pub fn new(from: VertexId, to: VertexId, time: u32) -> Self {
        WalkStep { from, to, time }
    }
}

impl fmt::Display for WalkStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-[{}]->{}", self.from, self.time, self.to)
    }
}

/// A sequence of time-edge traversals claimed to form a restless walk or
/// path. Construction does not validate; [`check_walk`] and [`check_path`]
/// diagnose violations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TemporalWalk {
    steps: Vec<WalkStep>,
}

impl TemporalWalk {
    pub fn from_steps(steps: Vec<WalkStep>) -> Self {
        TemporalWalk { steps }
    }

    pub fn steps(&self) -> &[WalkStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> Option<VertexId> {
        self.steps.first().map(|s| s.from)
    }

    pub fn end(&self) -> Option<VertexId> {
        self.steps.last().map(|s| s.to)
    }

    /// Visited vertices in order: start, then the head of every step.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.start()
            .into_iter()
            .chain(self.steps.iter().map(|s| s.to))
    }

    /// Vertices other than the two endpoints. For a path these are exactly
    /// the deletable vertices that break it.
    pub fn internal_vertices(&self) -> std::collections::BTreeSet<VertexId> {
        let mut set: std::collections::BTreeSet<VertexId> = self.vertices().collect();
        if let (Some(s), Some(z)) = (self.start(), self.end()) {
            set.remove(&s);
            set.remove(&z);
        }
        set
    }

    /// Translates step endpoints through the id mapping of a vertex deletion,
    /// back to the original graph's ids.
    pub fn translated(&self, mapping: &VertexMapping) -> TemporalWalk {
        TemporalWalk {
            steps: self
                .steps
                .iter()
                .map(|s| WalkStep::new(mapping.to_old(s.from), mapping.to_old(s.to), s.time))
                .collect(),
        }
    }
}

impl fmt::Display for TemporalWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "(empty walk)");
        }
        write!(f, "{}", self.steps[0].from)?;
        for s in &self.steps {
            write!(f, " -[{}]-> {}", s.time, s.to)?;
        }
        Ok(())
    }
}

/// Witness kind tag used in the JSON wire format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Path,
    Walk,
}

/// JSON wire format for walk/path witnesses: the ordered steps plus a kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub steps: Vec<WalkStep>,
}

impl Witness {
    pub fn new(kind: WitnessKind, walk: &TemporalWalk) -> Self {
        Witness {
            kind,
            steps: walk.steps().to_vec(),
        }
    }

    pub fn walk(&self) -> TemporalWalk {
        TemporalWalk::from_steps(self.steps.clone())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("source and target must differ")]
    SourceEqualsTarget,
    #[error("vertex {vertex} outside 0..{count}")]
    UnknownVertex { vertex: VertexId, count: usize },
    #[error("delta {delta} outside 1..={lifetime}")]
    DeltaOutOfRange { delta: u32, lifetime: u32 },
}

/// A reachability question: is there a restless walk/path from `source` to
/// `target` with waiting bound `delta`?
#[derive(Debug, Clone, Copy)]
pub struct RestlessQuery<'g> {
    graph: &'g TemporalGraph,
    source: VertexId,
    target: VertexId,
    delta: u32,
}

impl<'g> RestlessQuery<'g> {
    pub fn new(
        graph: &'g TemporalGraph,
        source: VertexId,
        target: VertexId,
        delta: u32,
    ) -> Result<Self, QueryError> {
        for v in [source, target] {
            if !graph.contains_vertex(v) {
                return Err(QueryError::UnknownVertex {
                    vertex: v,
                    count: graph.vertex_count(),
                });
            }
        }
        if source == target {
            return Err(QueryError::SourceEqualsTarget);
        }
        if delta == 0 || delta > graph.lifetime() {
            return Err(QueryError::DeltaOutOfRange {
                delta,
                lifetime: graph.lifetime(),
            });
        }
        Ok(RestlessQuery {
            graph,
            source,
            target,
            delta,
        })
    }

    pub fn graph(&self) -> &'g TemporalGraph {
        self.graph
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }
}

/// First condition a claimed walk or path violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// No steps, but source and target differ.
    EmptyWalk,
    WrongSource { expected: VertexId, found: VertexId },
    WrongTarget { expected: VertexId, found: VertexId },
    /// Step `step` does not start where the previous step ended.
    BrokenChain { step: usize },
    /// Step `step` is not a time edge of the graph.
    MissingEdge { step: usize },
    /// Step `step` has a smaller time stamp than its predecessor.
    DecreasingTime { step: usize },
    /// The wait before step `step` exceeds delta.
    WaitTooLong { step: usize, gap: u32, delta: u32 },
    /// A vertex is visited twice (path check only).
    RepeatedVertex { vertex: VertexId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyWalk => write!(f, "walk has no steps but source differs from target"),
            Violation::WrongSource { expected, found } => {
                write!(f, "walk starts at {found}, expected source {expected}")
            }
            Violation::WrongTarget { expected, found } => {
                write!(f, "walk ends at {found}, expected target {expected}")
            }
            Violation::BrokenChain { step } => {
                write!(f, "step {step} does not start where step {} ended", step - 1)
            }
            Violation::MissingEdge { step } => {
                write!(f, "step {step} is not a time edge of the graph")
            }
            Violation::DecreasingTime { step } => {
                write!(f, "step {step} has a decreasing time stamp")
            }
            Violation::WaitTooLong { step, gap, delta } => {
                write!(f, "wait of {gap} before step {step} exceeds delta {delta}")
            }
            Violation::RepeatedVertex { vertex } => {
                write!(f, "vertex {vertex} is visited more than once")
            }
        }
    }
}

fn check(q: &RestlessQuery<'_>, w: &TemporalWalk, require_distinct: bool) -> Result<(), Violation> {
    let steps = w.steps();
    if steps.is_empty() {
        return Err(Violation::EmptyWalk);
    }
    if steps[0].from != q.source() {
        return Err(Violation::WrongSource {
            expected: q.source(),
            found: steps[0].from,
        });
    }
    let mut seen: HashSet<VertexId> = HashSet::new();
    seen.insert(steps[0].from);
    for (i, step) in steps.iter().enumerate() {
        if i > 0 {
            if step.from != steps[i - 1].to {
                return Err(Violation::BrokenChain { step: i });
            }
            let prev = steps[i - 1].time;
            if step.time < prev {
                return Err(Violation::DecreasingTime { step: i });
            }
            let gap = step.time - prev;
            if gap > q.delta() {
                return Err(Violation::WaitTooLong {
                    step: i,
                    gap,
                    delta: q.delta(),
                });
            }
        }
        if !q.graph().contains_time_edge(step.from, step.to, step.time) {
            return Err(Violation::MissingEdge { step: i });
        }
        if require_distinct && !seen.insert(step.to) {
            return Err(Violation::RepeatedVertex { vertex: step.to });
        }
    }
    let last = steps.last().expect("nonempty");
    if last.to != q.target() {
        return Err(Violation::WrongTarget {
            expected: q.target(),
            found: last.to,
        });
    }
    Ok(())
}

/// Checks the restless walk conditions, reporting the first violation.
pub fn check_walk(q: &RestlessQuery<'_>, w: &TemporalWalk) -> Result<(), Violation> {
    check(q, w, false)
}

/// `true` iff `w` is a restless walk from source to target.
pub fn verify_walk(q: &RestlessQuery<'_>, w: &TemporalWalk) -> bool {
    check_walk(q, w).is_ok()
}

/// Checks the restless path conditions (walk conditions plus pairwise
/// distinct vertices), reporting the first violation.
pub fn check_path(q: &RestlessQuery<'_>, w: &TemporalWalk) -> Result<(), Violation> {
    check(q, w, true)
}

/// `true` iff `w` is a restless path from source to target.
pub fn verify_path(q: &RestlessQuery<'_>, w: &TemporalWalk) -> bool {
    check_path(q, w).is_ok()
}

// ---------------------------------------------------------------------------
// Walk search (polynomial)
// ---------------------------------------------------------------------------

/// Finds a restless walk if one exists.
///
/// Works on the successor graph over directed time edges: there is an arc
/// from `(u->v, t)` to `(v->w, t')` iff `t <= t' <= t + delta`. Sources are
/// the directed edges leaving the query source, sinks those entering the
/// target; a breadth-first traversal gives a witness. Directed edges are
/// explored in ascending `(t, from, to)` order, so witnesses are
/// reproducible. Runs in `O(M log M + M * W)` where `W` is the largest
/// successor window, at most `O(M^2)` overall.
pub fn find_walk(q: &RestlessQuery<'_>) -> Option<TemporalWalk> {
    // Directed nodes sorted by (t, from, to); per-vertex buckets keep order.
    let mut nodes: Vec<WalkStep> = Vec::with_capacity(q.graph().time_edge_count() * 2);
    for e in q.graph().time_edges() {
        nodes.push(WalkStep::new(e.u(), e.v(), e.time()));
        nodes.push(WalkStep::new(e.v(), e.u(), e.time()));
    }
    nodes.sort_by_key(|s| (s.time, s.from, s.to));

    let n = q.graph().vertex_count();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, s) in nodes.iter().enumerate() {
        out[s.from.index()].push(i);
    }

    let mut parent: Vec<usize> = vec![usize::MAX; nodes.len()];
    let mut visited: Vec<bool> = vec![false; nodes.len()];
    let mut queue: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
    for &i in &out[q.source().index()] {
        visited[i] = true;
        queue.push_back(i);
    }

    while let Some(i) = queue.pop_front() {
        let step = nodes[i];
        if step.to == q.target() {
            let mut rev = vec![step];
            let mut j = i;
            while parent[j] != usize::MAX {
                j = parent[j];
                rev.push(nodes[j]);
            }
            rev.reverse();
            let walk = TemporalWalk::from_steps(rev);
            assert!(
                verify_walk(q, &walk),
                "internal error: walk search produced an invalid witness"
            );
            return Some(walk);
        }
        let bucket = &out[step.to.index()];
        let hi = step.time.saturating_add(q.delta());
        let start = bucket.partition_point(|&j| nodes[j].time < step.time);
        for &j in &bucket[start..] {
            if nodes[j].time > hi {
                break;
            }
            if !visited[j] {
                visited[j] = true;
                parent[j] = i;
                queue.push_back(j);
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Path search (exact, budgeted)
// ---------------------------------------------------------------------------

/// Result of an exact path search. Budget exhaustion is distinct from a
/// definitive "no path".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathOutcome {
    Found(TemporalWalk),
    Absent,
    BudgetExceeded,
}

impl PathOutcome {
    pub fn found(&self) -> Option<&TemporalWalk> {
        match self {
            PathOutcome::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, PathOutcome::Absent)
    }
}

/// Visited-vertex set; a single word for graphs up to 128 vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum VisitSet {
    Small(u128),
    Large(Box<[u64]>),
}

impl VisitSet {
    fn new(n: usize) -> Self {
        if n <= 128 {
            VisitSet::Small(0)
        } else {
            VisitSet::Large(vec![0u64; n.div_ceil(64)].into_boxed_slice())
        }
    }

    fn contains(&self, v: VertexId) -> bool {
        let i = v.index();
        match self {
            VisitSet::Small(bits) => bits & (1u128 << i) != 0,
            VisitSet::Large(words) => words[i / 64] & (1u64 << (i % 64)) != 0,
        }
    }

    fn insert(&mut self, v: VertexId) {
        let i = v.index();
        match self {
            VisitSet::Small(bits) => *bits |= 1u128 << i,
            VisitSet::Large(words) => words[i / 64] |= 1u64 << (i % 64),
        }
    }

    fn remove(&mut self, v: VertexId) {
        let i = v.index();
        match self {
            VisitSet::Small(bits) => *bits &= !(1u128 << i),
            VisitSet::Large(words) => words[i / 64] &= !(1u64 << (i % 64)),
        }
    }
}

enum Flow {
    Found,
    Exhausted,
    OutOfBudget,
}

struct PathSearcher {
    adjacency: Vec<Vec<(u32, VertexId)>>,
    target: VertexId,
    delta: u32,
    budget: usize,
    expanded: usize,
    visited: VisitSet,
    steps: Vec<WalkStep>,
    // Fully-explored failed states (vertex, arrival, visited); arrival 0
    // encodes "no edge taken yet".
    memo: HashSet<(VertexId, u32, VisitSet)>,
}

impl PathSearcher {
    fn dfs(&mut self, at: VertexId, arrival: u32) -> Flow {
        self.expanded += 1;
        if self.expanded > self.budget {
            return Flow::OutOfBudget;
        }
        if self
            .memo
            .contains(&(at, arrival, self.visited.clone()))
        {
            return Flow::Exhausted;
        }
        let (lo, hi) = if arrival == 0 {
            (1u32, u32::MAX)
        } else {
            (arrival, arrival.saturating_add(self.delta))
        };
        let bucket_len = self.adjacency[at.index()].len();
        let start = self.adjacency[at.index()].partition_point(|&(t, _)| t < lo);
        for idx in start..bucket_len {
            let (t, w) = self.adjacency[at.index()][idx];
            if t > hi {
                break;
            }
            if self.visited.contains(w) {
                continue;
            }
            self.steps.push(WalkStep::new(at, w, t));
            if w == self.target {
                return Flow::Found;
            }
            self.visited.insert(w);
            match self.dfs(w, t) {
                Flow::Found => return Flow::Found,
                Flow::OutOfBudget => return Flow::OutOfBudget,
                Flow::Exhausted => {
                    self.visited.remove(w);
                    self.steps.pop();
                }
            }
        }
        self.memo.insert((at, arrival, self.visited.clone()));
        Flow::Exhausted
    }
}

/// Exact search for a restless path with the default node budget.
pub fn find_path(q: &RestlessQuery<'_>) -> PathOutcome {
    find_path_with_budget(q, DEFAULT_NODE_BUDGET)
}

/// Exact depth-first search over (vertex, arrival time, visited set) states.
/// States are memoized exactly; no dominance pruning is applied. Time edges
/// are explored in ascending `(t, neighbor)` order for reproducible
/// witnesses. Exceeding `budget` node expansions aborts the search with
/// [`PathOutcome::BudgetExceeded`].
pub fn find_path_with_budget(q: &RestlessQuery<'_>, budget: usize) -> PathOutcome {
    let n = q.graph().vertex_count();
    let mut adjacency: Vec<Vec<(u32, VertexId)>> = vec![Vec::new(); n];
    for e in q.graph().time_edges() {
        adjacency[e.u().index()].push((e.time(), e.v()));
        adjacency[e.v().index()].push((e.time(), e.u()));
    }
    for bucket in &mut adjacency {
        bucket.sort_unstable();
    }

    let mut visited = VisitSet::new(n);
    visited.insert(q.source());
    let mut searcher = PathSearcher {
        adjacency,
        target: q.target(),
        delta: q.delta(),
        budget,
        expanded: 0,
        visited,
        steps: Vec::new(),
        memo: HashSet::new(),
    };
    match searcher.dfs(q.source(), 0) {
        Flow::Found => {
            let walk = TemporalWalk::from_steps(searcher.steps);
            assert!(
                verify_path(q, &walk),
                "internal error: path search produced an invalid witness"
            );
            PathOutcome::Found(walk)
        }
        Flow::Exhausted => PathOutcome::Absent,
        Flow::OutOfBudget => PathOutcome::BudgetExceeded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemporalGraph;

    fn graph(n: usize, lifetime: u32, triples: &[(u32, u32, u32)]) -> TemporalGraph {
        TemporalGraph::with_edges(n, lifetime, triples.iter().copied()).unwrap()
    }

    fn walk(steps: &[(u32, u32, u32)]) -> TemporalWalk {
        TemporalWalk::from_steps(
            steps
                .iter()
                .map(|&(u, v, t)| WalkStep::new(VertexId(u), VertexId(v), t))
                .collect(),
        )
    }

    // s=0, a=1, z=2 throughout.

    #[test]
    fn walk_with_gap_exactly_delta_is_valid() {
        let g = graph(3, 2, &[(0, 1, 1), (1, 2, 2)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(2), 1).unwrap();
        assert!(verify_walk(&q, &walk(&[(0, 1, 1), (1, 2, 2)])));
    }

    #[test]
    fn walk_with_too_long_wait_is_invalid() {
        let g = graph(3, 5, &[(0, 1, 1), (1, 2, 5)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(2), 1).unwrap();
        let w = walk(&[(0, 1, 1), (1, 2, 5)]);
        assert_eq!(
            check_walk(&q, &w),
            Err(Violation::WaitTooLong {
                step: 1,
                gap: 4,
                delta: 1
            })
        );
    }

    #[test]
    fn walk_with_decreasing_stamps_is_invalid() {
        let g = graph(3, 2, &[(0, 1, 2), (1, 2, 1)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(2), 1).unwrap();
        let w = walk(&[(0, 1, 2), (1, 2, 1)]);
        assert_eq!(check_walk(&q, &w), Err(Violation::DecreasingTime { step: 1 }));
    }

    #[test]
    fn walk_step_must_be_a_time_edge() {
        let g = graph(3, 2, &[(0, 1, 1)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(2), 2).unwrap();
        let w = walk(&[(0, 1, 1), (1, 2, 2)]);
        assert_eq!(check_walk(&q, &w), Err(Violation::MissingEdge { step: 1 }));
    }

    #[test]
    fn simple_two_step_path_verifies() {
        let g = graph(3, 1, &[(0, 1, 1), (1, 2, 1)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(2), 1).unwrap();
        assert!(verify_path(&q, &walk(&[(0, 1, 1), (1, 2, 1)])));
    }

    #[test]
    fn revisiting_walk_is_not_a_path() {
        // s=0, a=1, b=2, z=3
        let g = graph(4, 4, &[(0, 1, 1), (1, 2, 2), (1, 2, 3), (1, 3, 4)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(3), 1).unwrap();
        let w = walk(&[(0, 1, 1), (1, 2, 2), (2, 1, 3), (1, 3, 4)]);
        assert!(verify_walk(&q, &w));
        assert_eq!(
            check_path(&q, &w),
            Err(Violation::RepeatedVertex { vertex: VertexId(1) })
        );
    }

    #[test]
    fn empty_walk_never_reaches_target() {
        let g = graph(2, 1, &[(0, 1, 1)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(1), 1).unwrap();
        assert_eq!(check_walk(&q, &walk(&[])), Err(Violation::EmptyWalk));
        assert_eq!(check_path(&q, &walk(&[])), Err(Violation::EmptyWalk));
    }

    #[test]
    fn find_walk_revisits_when_needed() {
        let g = graph(4, 4, &[(0, 1, 1), (1, 2, 2), (1, 2, 3), (1, 3, 4)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(3), 1).unwrap();
        let w = find_walk(&q).expect("walk exists");
        assert!(verify_walk(&q, &w));
        assert_eq!(w.len(), 4);
    }

    #[test]
    fn find_walk_respects_waiting_bound() {
        let g = graph(3, 5, &[(0, 1, 1), (1, 2, 5)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(2), 1).unwrap();
        assert_eq!(find_walk(&q), None);
        let relaxed = RestlessQuery::new(&g, VertexId(0), VertexId(2), 4).unwrap();
        assert!(find_walk(&relaxed).is_some());
    }

    #[test]
    fn find_walk_single_edge() {
        let g = graph(2, 1, &[(0, 1, 1)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(1), 1).unwrap();
        let w = find_walk(&q).unwrap();
        assert_eq!(w.steps(), &[WalkStep::new(VertexId(0), VertexId(1), 1)]);
    }

    #[test]
    fn find_path_rejects_walk_only_graph() {
        let g = graph(4, 4, &[(0, 1, 1), (1, 2, 2), (1, 2, 3), (1, 3, 4)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(3), 1).unwrap();
        assert_eq!(find_path(&q), PathOutcome::Absent);
        assert!(find_walk(&q).is_some());
    }

    #[test]
    fn find_path_on_single_row() {
        // s=0, xT=1, xF=2, z=3, all edges at time 1
        let g = graph(4, 1, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(3), 1).unwrap();
        let w = find_path(&q).found().cloned().expect("path exists");
        assert_eq!(w.len(), 3);
    }

    #[test]
    fn find_path_on_disconnected_source() {
        let g = graph(4, 2, &[(1, 2, 1)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(3), 1).unwrap();
        assert_eq!(find_path(&q), PathOutcome::Absent);
        assert_eq!(find_walk(&q), None);
    }

    #[test]
    fn budget_exhaustion_is_reported_as_such() {
        let g = graph(3, 1, &[(0, 1, 1), (1, 2, 1)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(2), 1).unwrap();
        assert_eq!(find_path_with_budget(&q, 1), PathOutcome::BudgetExceeded);
        assert!(matches!(
            find_path_with_budget(&q, 100),
            PathOutcome::Found(_)
        ));
    }

    #[test]
    fn query_validation() {
        let g = graph(3, 2, &[(0, 1, 1)]);
        assert!(matches!(
            RestlessQuery::new(&g, VertexId(0), VertexId(0), 1),
            Err(QueryError::SourceEqualsTarget)
        ));
        assert!(matches!(
            RestlessQuery::new(&g, VertexId(0), VertexId(9), 1),
            Err(QueryError::UnknownVertex { .. })
        ));
        assert!(matches!(
            RestlessQuery::new(&g, VertexId(0), VertexId(1), 3),
            Err(QueryError::DeltaOutOfRange { .. })
        ));
        assert!(matches!(
            RestlessQuery::new(&g, VertexId(0), VertexId(1), 0),
            Err(QueryError::DeltaOutOfRange { .. })
        ));
    }

    #[test]
    fn witness_json_round_trip() {
        let w = walk(&[(0, 1, 1), (1, 2, 2)]);
        let witness = Witness::new(WitnessKind::Path, &w);
        let text = serde_json::to_string(&witness).unwrap();
        assert!(text.contains("\"kind\":\"path\""));
        assert!(text.contains("\"u\":0"));
        let back: Witness = serde_json::from_str(&text).unwrap();
        assert_eq!(back.walk(), w);
    }

    #[test]
    fn internal_vertices_exclude_endpoints() {
        let w = walk(&[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        let internal = w.internal_vertices();
        assert_eq!(
            internal.into_iter().collect::<Vec<_>>(),
            vec![VertexId(1), VertexId(2)]
        );
    }
}
