//! Deciding whether deleting at most `k` vertices (never the two terminals)
//! destroys every restless temporal path between them.
//!
//! Verifying a candidate separator is itself a restless-path search, so even
//! the checker is exponential in the worst case; every solver here therefore
//! reports `Indeterminate` when a search budget runs out instead of guessing.
//! Two solvers are provided: plain enumerate-and-verify
//! ([`solve_bruteforce`]) and a lazy counterexample-guided loop
//! ([`solve_cegar`]) that alternates between an exact minimum-hitting-set
//! step over the internal vertices of the paths found so far and a path
//! oracle on the graph with the current candidate removed.

use crate::graph::{TemporalGraph, VertexId};
use crate::restless::{
    check_path, find_path_with_budget, PathOutcome, RestlessQuery, TemporalWalk, Witness,
    WitnessKind, DEFAULT_NODE_BUDGET,
};
use itertools::Itertools;
use serde_json::json;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("source and target must differ")]
    SameEndpoints,
    #[error("vertex {vertex} outside 0..{count}")]
    UnknownVertex { vertex: VertexId, count: usize },
    #[error("delta {delta} outside 1..={lifetime}")]
    DeltaOutOfRange { delta: u32, lifetime: u32 },
    #[error("budget {k} exceeds |V| - 2 = {max}")]
    BudgetTooLarge { k: usize, max: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeparatorError {
    #[error("separator contains terminal vertex {vertex}")]
    TouchesTerminal { vertex: VertexId },
    #[error("separator of size {size} exceeds budget k = {k}")]
    TooLarge { size: usize, k: usize },
    #[error("vertex {vertex} outside 0..{count}")]
    UnknownVertex { vertex: VertexId, count: usize },
    #[error("verification ran out of budget")]
    BudgetExceeded,
}

/// A separation problem: graph, two terminals, deletion budget, and waiting
/// bound.
#[derive(Debug, Clone)]
pub struct SeparatorInstance {
    graph: TemporalGraph,
    source: VertexId,
    target: VertexId,
    k: usize,
    delta: u32,
}

impl SeparatorInstance {
    pub fn new(
        graph: TemporalGraph,
        source: VertexId,
        target: VertexId,
        k: usize,
        delta: u32,
    ) -> Result<Self, InstanceError> {
        for v in [source, target] {
            if !graph.contains_vertex(v) {
                return Err(InstanceError::UnknownVertex {
                    vertex: v,
                    count: graph.vertex_count(),
                });
            }
        }
        if source == target {
            return Err(InstanceError::SameEndpoints);
        }
        if delta == 0 || delta > graph.lifetime() {
            return Err(InstanceError::DeltaOutOfRange {
                delta,
                lifetime: graph.lifetime(),
            });
        }
        let max = graph.vertex_count() - 2;
        if k > max {
            return Err(InstanceError::BudgetTooLarge { k, max });
        }
        Ok(SeparatorInstance {
            graph,
            source,
            target,
            k,
            delta,
        })
    }

    pub fn graph(&self) -> &TemporalGraph {
        &self.graph
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn query(&self) -> RestlessQuery<'_> {
        RestlessQuery::new(&self.graph, self.source, self.target, self.delta)
            .expect("instance invariants imply a valid query")
    }
}

/// A candidate vertex set to delete.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Separator {
    vertices: BTreeSet<VertexId>,
}

impl Separator {
    pub fn new<I: IntoIterator<Item = VertexId>>(vertices: I) -> Self {
        Separator {
            vertices: vertices.into_iter().collect(),
        }
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

impl fmt::Display for Separator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.vertices.iter().join(", "))
    }
}

/// Outcome of checking one candidate separator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SepVerdict {
    /// No restless path survives the deletion.
    Separates,
    /// This path (in original vertex ids) survives.
    PathSurvives(TemporalWalk),
    /// The path search ran out of budget; nothing can be concluded.
    Indeterminate,
}

/// Checks whether deleting `sep` destroys all restless paths, using up to
/// `path_budget` search expansions. Any surviving path is reported in the
/// original graph's vertex ids.
pub fn check_separator(
    inst: &SeparatorInstance,
    sep: &Separator,
    path_budget: usize,
) -> Result<SepVerdict, SeparatorError> {
    for &v in sep.vertices() {
        if v == inst.source() || v == inst.target() {
            return Err(SeparatorError::TouchesTerminal { vertex: v });
        }
        if !inst.graph().contains_vertex(v) {
            return Err(SeparatorError::UnknownVertex {
                vertex: v,
                count: inst.graph().vertex_count(),
            });
        }
    }
    if sep.len() > inst.k() {
        return Err(SeparatorError::TooLarge {
            size: sep.len(),
            k: inst.k(),
        });
    }
    let (reduced, mapping) = inst
        .graph()
        .remove_vertices(sep.vertices())
        .expect("separator vertices validated above");
    let source = mapping.to_new(inst.source()).expect("terminal survives");
    let target = mapping.to_new(inst.target()).expect("terminal survives");
    let q = RestlessQuery::new(&reduced, source, target, inst.delta())
        .expect("deletion preserves query validity");
    Ok(match find_path_with_budget(&q, path_budget) {
        PathOutcome::Found(walk) => {
            let original = walk.translated(&mapping);
            debug_assert!(
                check_path(&inst.query(), &original).is_ok(),
                "surviving path must verify in the original graph"
            );
            SepVerdict::PathSurvives(original)
        }
        PathOutcome::Absent => SepVerdict::Separates,
        PathOutcome::BudgetExceeded => SepVerdict::Indeterminate,
    })
}

/// `true` iff `sep` is a valid restless separator. Budget exhaustion is an
/// error, never `true`.
pub fn verify_separator(inst: &SeparatorInstance, sep: &Separator) -> Result<bool, SeparatorError> {
    match check_separator(inst, sep, DEFAULT_NODE_BUDGET)? {
        SepVerdict::Separates => Ok(true),
        SepVerdict::PathSurvives(_) => Ok(false),
        SepVerdict::Indeterminate => Err(SeparatorError::BudgetExceeded),
    }
}

/// Solver answer. `Yes` carries a verified separator; `No` is only emitted
/// when exhaustively justified; `Indeterminate` means a budget ran out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Yes(Separator),
    No,
    Indeterminate,
}

impl Answer {
    pub fn is_yes(&self) -> bool {
        matches!(self, Answer::Yes(_))
    }

    pub fn separator(&self) -> Option<&Separator> {
        match self {
            Answer::Yes(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Answer::Yes(_) => "yes",
            Answer::No => "no",
            Answer::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Restless-path searches issued.
    pub oracle_calls: usize,
    /// Candidate separators whose verification was attempted.
    pub candidates_tested: usize,
    pub wall: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub answer: Answer,
    /// Restless paths discovered while solving, in original vertex ids,
    /// deduplicated. For the counterexample-guided solver these are exactly
    /// the constraint paths.
    pub counterexample_paths: Vec<TemporalWalk>,
    pub stats: SolveStats,
}

impl SolveReport {
    pub fn to_json_value(&self, graph: &TemporalGraph) -> serde_json::Value {
        let separator = self.answer.separator();
        json!({
            "answer": self.answer.as_str(),
            "separator": separator.map(|s| s.vertices().iter().map(|v| v.0).collect::<Vec<_>>()),
            "separator_labels": separator.map(|s| {
                s.vertices().iter().map(|&v| graph.label(v).to_string()).collect::<Vec<_>>()
            }),
            "counterexample_paths": self
                .counterexample_paths
                .iter()
                .map(|w| Witness::new(WitnessKind::Path, w))
                .collect::<Vec<_>>(),
            "statistics": {
                "oracle_calls": self.stats.oracle_calls,
                "candidates_tested": self.stats.candidates_tested,
                "wall_time_ms": self.stats.wall.as_secs_f64() * 1e3,
            },
        })
    }
}

/// Budgets for the searches inside a solve. A run that exhausts either
/// budget yields `Answer::Indeterminate`.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub path_budget: usize,
    pub hitting_budget: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            path_budget: DEFAULT_NODE_BUDGET,
            hitting_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

fn deletable_vertices(inst: &SeparatorInstance) -> Vec<VertexId> {
    inst.graph()
        .vertices()
        .filter(|&v| v != inst.source() && v != inst.target())
        .collect()
}

/// Enumerate-and-verify: tries every candidate set of size `0..=k` in
/// ascending size, then lexicographic order, and returns the first verified
/// separator. Exact; a NO answer means every candidate failed.
pub fn solve_bruteforce(inst: &SeparatorInstance, opts: &SolveOptions) -> SolveReport {
    let started = Instant::now();
    let mut stats = SolveStats::default();
    let mut paths: Vec<TemporalWalk> = Vec::new();
    let mut seen_paths: HashSet<TemporalWalk> = HashSet::new();
    let mut indeterminate = false;
    let candidates = deletable_vertices(inst);

    for size in 0..=inst.k() {
        for combo in candidates.iter().copied().combinations(size) {
            let sep = Separator::new(combo);
            stats.candidates_tested += 1;
            stats.oracle_calls += 1;
            match check_separator(inst, &sep, opts.path_budget)
                .expect("enumerated candidates respect the separator contract")
            {
                SepVerdict::Separates => {
                    stats.wall = started.elapsed();
                    return SolveReport {
                        answer: Answer::Yes(sep),
                        counterexample_paths: paths,
                        stats,
                    };
                }
                SepVerdict::PathSurvives(walk) => {
                    if seen_paths.insert(walk.clone()) {
                        paths.push(walk);
                    }
                }
                SepVerdict::Indeterminate => indeterminate = true,
            }
        }
    }
    stats.wall = started.elapsed();
    SolveReport {
        answer: if indeterminate {
            Answer::Indeterminate
        } else {
            Answer::No
        },
        counterexample_paths: paths,
        stats,
    }
}

/// Counterexample-guided solver.
///
/// Maintains a family of constraint sets, each the internal vertices of a
/// restless path already found. Each round computes an exact minimum hitting
/// set of the family: if it needs more than `k` vertices no separator fits
/// the budget (every separator must hit every constraint), so the answer is
/// NO; otherwise the candidate is checked by the path oracle and either
/// accepted or refuted by a fresh path. A surviving path is disjoint from
/// the candidate, so its constraint set is new and the loop terminates.
pub fn solve_cegar(inst: &SeparatorInstance, opts: &SolveOptions) -> SolveReport {
    let started = Instant::now();
    let mut stats = SolveStats::default();
    let mut family: Vec<BTreeSet<VertexId>> = Vec::new();
    let mut paths: Vec<TemporalWalk> = Vec::new();

    loop {
        let candidate = match min_hitting_set(&family, opts.hitting_budget) {
            Err(_) => {
                stats.wall = started.elapsed();
                return SolveReport {
                    answer: Answer::Indeterminate,
                    counterexample_paths: paths,
                    stats,
                };
            }
            // Some constraint cannot be hit at all (a direct terminal-to-
            // terminal path has no internal vertices).
            Ok(None) => {
                stats.wall = started.elapsed();
                return SolveReport {
                    answer: Answer::No,
                    counterexample_paths: paths,
                    stats,
                };
            }
            Ok(Some(h)) => h,
        };
        if candidate.len() > inst.k() {
            stats.wall = started.elapsed();
            return SolveReport {
                answer: Answer::No,
                counterexample_paths: paths,
                stats,
            };
        }

        let sep = Separator::new(candidate.iter().copied());
        stats.candidates_tested += 1;
        stats.oracle_calls += 1;
        match check_separator(inst, &sep, opts.path_budget)
            .expect("hitting sets of internal-vertex constraints respect the contract")
        {
            SepVerdict::Separates => {
                debug_assert!(verify_separator(inst, &sep).unwrap_or(false));
                stats.wall = started.elapsed();
                return SolveReport {
                    answer: Answer::Yes(sep),
                    counterexample_paths: paths,
                    stats,
                };
            }
            SepVerdict::PathSurvives(walk) => {
                assert!(
                    check_path(&inst.query(), &walk).is_ok(),
                    "constraint paths must verify in the original graph"
                );
                let constraint = walk.internal_vertices();
                debug_assert!(
                    !family.contains(&constraint),
                    "a surviving path yields a constraint the candidate missed"
                );
                family.push(constraint);
                paths.push(walk);
            }
            SepVerdict::Indeterminate => {
                stats.wall = started.elapsed();
                return SolveReport {
                    answer: Answer::Indeterminate,
                    counterexample_paths: paths,
                    stats,
                };
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("hitting-set search budget of {budget} nodes exhausted")]
pub struct HittingBudgetExceeded {
    pub budget: usize,
}

/// Exact minimum hitting set by branch and bound. Returns `None` when the
/// family contains an empty (unhittable) set. Branches on the elements of a
/// smallest uncovered constraint in ascending vertex order, pruning with a
/// greedy disjoint-constraint packing bound, so results are deterministic.
pub fn min_hitting_set(
    family: &[BTreeSet<VertexId>],
    node_budget: usize,
) -> Result<Option<BTreeSet<VertexId>>, HittingBudgetExceeded> {
    if family.iter().any(|s| s.is_empty()) {
        return Ok(None);
    }
    struct Search<'a> {
        family: &'a [BTreeSet<VertexId>],
        best: Option<BTreeSet<VertexId>>,
        nodes: usize,
        budget: usize,
    }

    impl Search<'_> {
        fn uncovered<'s>(&'s self, chosen: &BTreeSet<VertexId>) -> Vec<&'s BTreeSet<VertexId>> {
            self.family
                .iter()
                .filter(|s| s.is_disjoint(chosen))
                .collect()
        }

        fn packing_bound(uncovered: &[&BTreeSet<VertexId>]) -> usize {
            let mut packed: Vec<&BTreeSet<VertexId>> = Vec::new();
            for s in uncovered {
                if packed.iter().all(|p| p.is_disjoint(s)) {
                    packed.push(s);
                }
            }
            packed.len()
        }

        fn branch(&mut self, chosen: &mut BTreeSet<VertexId>) -> Result<(), HittingBudgetExceeded> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(HittingBudgetExceeded {
                    budget: self.budget,
                });
            }
            let uncovered = self.uncovered(chosen);
            if uncovered.is_empty() {
                if self.best.as_ref().is_none_or(|b| chosen.len() < b.len()) {
                    self.best = Some(chosen.clone());
                }
                return Ok(());
            }
            if let Some(best) = &self.best {
                if chosen.len() + Self::packing_bound(&uncovered) >= best.len() {
                    return Ok(());
                }
            }
            let pivot: BTreeSet<VertexId> = uncovered
                .iter()
                .min_by_key(|s| s.len())
                .map(|s| (*s).clone())
                .expect("nonempty uncovered family");
            for &v in &pivot {
                chosen.insert(v);
                self.branch(chosen)?;
                chosen.remove(&v);
            }
            Ok(())
        }
    }

    let mut search = Search {
        family,
        best: None,
        nodes: 0,
        budget: node_budget,
    };
    let mut chosen = BTreeSet::new();
    search.branch(&mut chosen)?;
    Ok(Some(search.best.expect("empty choice covers empty family")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemporalGraph;
    use crate::restless::find_path;

    fn graph(n: usize, lifetime: u32, triples: &[(u32, u32, u32)]) -> TemporalGraph {
        TemporalGraph::with_edges(n, lifetime, triples.iter().copied()).unwrap()
    }

    fn vids(ids: &[u32]) -> BTreeSet<VertexId> {
        ids.iter().map(|&i| VertexId(i)).collect()
    }

    /// Two disjoint rows s - xT - xF - z, all edges at time 1.
    /// Ids: s=0, z=1, x1T=2, x1F=3, x2T=4, x2F=5.
    fn two_rows() -> TemporalGraph {
        graph(
            6,
            1,
            &[
                (0, 2, 1),
                (2, 3, 1),
                (3, 1, 1),
                (0, 4, 1),
                (4, 5, 1),
                (5, 1, 1),
            ],
        )
    }

    fn instance(g: TemporalGraph, k: usize, delta: u32) -> SeparatorInstance {
        SeparatorInstance::new(g, VertexId(0), VertexId(1), k, delta).unwrap()
    }

    #[test]
    fn one_vertex_per_row_separates() {
        let inst = instance(two_rows(), 2, 1);
        let sep = Separator::new([VertexId(2), VertexId(5)]);
        assert_eq!(verify_separator(&inst, &sep), Ok(true));
    }

    #[test]
    fn empty_set_fails_against_direct_edge() {
        let inst = instance(graph(2, 1, &[(0, 1, 1)]), 0, 1);
        assert_eq!(verify_separator(&inst, &Separator::default()), Ok(false));
    }

    #[test]
    fn contract_violations_are_errors() {
        let inst = instance(two_rows(), 1, 1);
        assert!(matches!(
            verify_separator(&inst, &Separator::new([VertexId(0)])),
            Err(SeparatorError::TouchesTerminal { .. })
        ));
        assert!(matches!(
            verify_separator(&inst, &Separator::new([VertexId(2), VertexId(4)])),
            Err(SeparatorError::TooLarge { size: 2, k: 1 })
        ));
        assert!(matches!(
            verify_separator(&inst, &Separator::new([VertexId(40)])),
            Err(SeparatorError::UnknownVertex { .. })
        ));
    }

    #[test]
    fn surviving_path_is_reported_in_original_ids() {
        let inst = instance(two_rows(), 2, 1);
        let sep = Separator::new([VertexId(2)]);
        match check_separator(&inst, &sep, DEFAULT_NODE_BUDGET).unwrap() {
            SepVerdict::PathSurvives(walk) => {
                assert!(check_path(&inst.query(), &walk).is_ok());
                assert_eq!(walk.internal_vertices(), vids(&[4, 5]));
            }
            other => panic!("expected surviving path, got {other:?}"),
        }
    }

    #[test]
    fn bruteforce_no_with_zero_budget_and_direct_edge() {
        let inst = instance(graph(2, 1, &[(0, 1, 1)]), 0, 1);
        let report = solve_bruteforce(&inst, &SolveOptions::default());
        assert_eq!(report.answer, Answer::No);
        assert_eq!(report.stats.candidates_tested, 1);
    }

    #[test]
    fn bruteforce_yes_with_empty_separator_when_no_path() {
        let g = graph(4, 4, &[(0, 2, 1), (2, 3, 2), (2, 3, 3), (2, 1, 4)]);
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(1), 1).unwrap();
        assert_eq!(find_path(&q), PathOutcome::Absent);
        let inst = instance(g, 0, 1);
        let report = solve_bruteforce(&inst, &SolveOptions::default());
        assert_eq!(report.answer, Answer::Yes(Separator::default()));
    }

    #[test]
    fn bruteforce_returns_first_candidate_in_order() {
        let inst = instance(two_rows(), 2, 1);
        let report = solve_bruteforce(&inst, &SolveOptions::default());
        // {2, 4} is the lexicographically first size-2 subset that works.
        assert_eq!(report.answer.separator().unwrap().vertices(), &vids(&[2, 4]));
    }

    #[test]
    fn cegar_on_disjoint_rows_uses_few_oracle_calls() {
        let inst = instance(two_rows(), 2, 1);
        let report = solve_cegar(&inst, &SolveOptions::default());
        assert!(report.answer.is_yes());
        assert!(report.stats.oracle_calls <= 3, "{:?}", report.stats);
        for walk in &report.counterexample_paths {
            assert!(check_path(&inst.query(), walk).is_ok());
        }
    }

    #[test]
    fn cegar_zero_budget_with_path_needs_one_oracle_call() {
        let inst = instance(two_rows(), 0, 1);
        let report = solve_cegar(&inst, &SolveOptions::default());
        assert_eq!(report.answer, Answer::No);
        assert_eq!(report.stats.oracle_calls, 1);
    }

    #[test]
    fn cegar_direct_edge_is_a_no_for_any_budget() {
        let g = graph(3, 1, &[(0, 1, 1), (0, 2, 1), (2, 1, 1)]);
        let inst = instance(g, 1, 1);
        let report = solve_cegar(&inst, &SolveOptions::default());
        assert_eq!(report.answer, Answer::No);
    }

    #[test]
    fn solvers_report_indeterminate_on_tiny_budget() {
        let inst = instance(two_rows(), 0, 1);
        let opts = SolveOptions {
            path_budget: 1,
            hitting_budget: 1_000,
        };
        assert_eq!(solve_bruteforce(&inst, &opts).answer, Answer::Indeterminate);
        assert_eq!(solve_cegar(&inst, &opts).answer, Answer::Indeterminate);
    }

    #[test]
    fn min_hitting_set_basics() {
        assert_eq!(min_hitting_set(&[], 100), Ok(Some(BTreeSet::new())));
        assert_eq!(min_hitting_set(&[vids(&[])], 100), Ok(None));
        let family = [vids(&[1, 2]), vids(&[2, 3])];
        assert_eq!(min_hitting_set(&family, 1_000), Ok(Some(vids(&[2]))));
        let family = [vids(&[1]), vids(&[2]), vids(&[1, 2])];
        assert_eq!(min_hitting_set(&family, 1_000), Ok(Some(vids(&[1, 2]))));
        let family = [vids(&[1, 2]), vids(&[3])];
        assert_eq!(min_hitting_set(&family, 1_000), Ok(Some(vids(&[1, 3]))));
    }

    #[test]
    fn min_hitting_set_budget() {
        let family = [vids(&[1, 2]), vids(&[2, 3]), vids(&[3, 4])];
        assert!(min_hitting_set(&family, 1).is_err());
    }

    #[test]
    fn instance_validation() {
        let g = graph(3, 2, &[(0, 1, 1)]);
        assert!(matches!(
            SeparatorInstance::new(g.clone(), VertexId(0), VertexId(0), 0, 1),
            Err(InstanceError::SameEndpoints)
        ));
        assert!(matches!(
            SeparatorInstance::new(g.clone(), VertexId(0), VertexId(1), 2, 1),
            Err(InstanceError::BudgetTooLarge { k: 2, max: 1 })
        ));
        assert!(matches!(
            SeparatorInstance::new(g.clone(), VertexId(0), VertexId(1), 0, 3),
            Err(InstanceError::DeltaOutOfRange { .. })
        ));
        assert!(matches!(
            SeparatorInstance::new(g, VertexId(0), VertexId(7), 0, 1),
            Err(InstanceError::UnknownVertex { .. })
        ));
    }

    #[test]
    fn report_json_shape() {
        let inst = instance(two_rows(), 2, 1);
        let report = solve_bruteforce(&inst, &SolveOptions::default());
        let value = report.to_json_value(inst.graph());
        assert_eq!(value["answer"], "yes");
        assert!(value["separator"].is_array());
        assert!(value["statistics"]["oracle_calls"].as_u64().unwrap() >= 1);
    }
}
