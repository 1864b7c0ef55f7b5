//! Independent brute-force reference implementations and seeded instance
//! generators.
//!
//! Every solver in this crate is validated against one of these oracles, so
//! they deliberately share no search code with the solvers they check. All
//! oracles are exact within hard input-size guards and fail loudly when a
//! guard is exceeded instead of degrading silently.

use crate::graph::{TemporalGraph, VertexId};
use crate::reductions::{HittingSetInstance, QbfInstance, VarRef};
use crate::restless::{RestlessQuery, TemporalWalk, WalkStep};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} {actual} exceeds oracle guard {limit}")]
    GuardExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("oracle enumeration budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

// ---------------------------------------------------------------------------
// Exists-forall SAT
// ---------------------------------------------------------------------------

const EAF_VARIABLE_GUARD: usize = 24;

fn clause_satisfied(clause: &[crate::reductions::Literal], xs: &[bool], ys: &[bool]) -> bool {
    clause.iter().any(|lit| {
        let value = match lit.var {
            VarRef::X(i) => xs[(i - 1) as usize],
            VarRef::Y(i) => ys[(i - 1) as usize],
        };
        value != lit.negated
    })
}

/// `true` iff the fixed X-assignment satisfies every clause under every
/// Y-assignment.
pub fn universal_check(q: &QbfInstance, xs: &[bool]) -> bool {
    let n_y = q.n_y() as usize;
    let mut ys = vec![false; n_y];
    for bits in 0..(1u64 << n_y) {
        for (j, y) in ys.iter_mut().enumerate() {
            *y = bits >> j & 1 == 1;
        }
        if !q.clauses().iter().all(|c| clause_satisfied(c, xs, &ys)) {
            return false;
        }
    }
    true
}

/// Exact exists-forall evaluation by double enumeration; returns the first
/// witnessing X-assignment in ascending binary order (bit `i` is `x_{i+1}`).
pub fn eaf_sat_witness(q: &QbfInstance) -> Result<Option<Vec<bool>>, OracleError> {
    let total = (q.n_x() + q.n_y()) as usize;
    if total > EAF_VARIABLE_GUARD {
        return Err(OracleError::GuardExceeded {
            what: "variable count",
            limit: EAF_VARIABLE_GUARD,
            actual: total,
        });
    }
    let n_x = q.n_x() as usize;
    let mut xs = vec![false; n_x];
    for bits in 0..(1u64 << n_x) {
        for (i, x) in xs.iter_mut().enumerate() {
            *x = bits >> i & 1 == 1;
        }
        if universal_check(q, &xs) {
            return Ok(Some(xs));
        }
    }
    Ok(None)
}

/// Decision form of [`eaf_sat_witness`].
pub fn eaf_sat_bruteforce(q: &QbfInstance) -> Result<bool, OracleError> {
    Ok(eaf_sat_witness(q)?.is_some())
}

// ---------------------------------------------------------------------------
// Hitting set
// ---------------------------------------------------------------------------

const HITTING_UNIVERSE_GUARD: usize = 24;

/// Smallest hitting set of the family if its size is within the instance
/// budget, else `None`. Candidates are enumerated in ascending size, then
/// lexicographically, so ties break toward the lexicographically smallest
/// set.
pub fn hitting_set_bruteforce(
    inst: &HittingSetInstance,
) -> Result<Option<BTreeSet<u32>>, OracleError> {
    let universe = inst.universe_size() as usize;
    if universe > HITTING_UNIVERSE_GUARD {
        return Err(OracleError::GuardExceeded {
            what: "universe size",
            limit: HITTING_UNIVERSE_GUARD,
            actual: universe,
        });
    }
    let elements: Vec<u32> = (1..=inst.universe_size()).collect();
    let max_size = (inst.budget() as usize).min(universe);
    for size in 0..=max_size {
        for combo in elements.iter().copied().combinations(size) {
            let chosen: BTreeSet<u32> = combo.into_iter().collect();
            if inst
                .sets()
                .iter()
                .all(|s| s.iter().any(|e| chosen.contains(e)))
            {
                return Ok(Some(chosen));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Restless path / walk enumeration
// ---------------------------------------------------------------------------

const PATH_VERTEX_GUARD: usize = 10;
const WALK_NODE_BUDGET: usize = 20_000_000;

struct StaticAdjacency {
    neighbors: Vec<Vec<VertexId>>,
    stamps: HashMap<(VertexId, VertexId), Vec<u32>>,
}

impl StaticAdjacency {
    fn new(g: &TemporalGraph) -> Self {
        let mut neighbors: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); g.vertex_count()];
        let mut stamps: HashMap<(VertexId, VertexId), Vec<u32>> = HashMap::new();
        for e in g.time_edges() {
            neighbors[e.u().index()].insert(e.v());
            neighbors[e.v().index()].insert(e.u());
            stamps.entry(e.endpoints()).or_default().push(e.time());
        }
        StaticAdjacency {
            neighbors: neighbors
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect(),
            stamps,
        }
    }

    fn stamps(&self, a: VertexId, b: VertexId) -> &[u32] {
        let key = if a < b { (a, b) } else { (b, a) };
        self.stamps.get(&key).map_or(&[], |v| v.as_slice())
    }
}

/// Tries to assign non-decreasing stamps with gaps at most delta to the
/// vertex sequence, choosing the smallest stamp at each position. Returns
/// the first complete assignment in that canonical order.
fn assign_stamps(
    adj: &StaticAdjacency,
    seq: &[VertexId],
    delta: u32,
    position: usize,
    previous: Option<u32>,
    chosen: &mut Vec<u32>,
) -> bool {
    if position + 1 == seq.len() {
        return true;
    }
    for &t in adj.stamps(seq[position], seq[position + 1]) {
        if let Some(p) = previous {
            if t < p {
                continue;
            }
            if t - p > delta {
                // Stamps are sorted ascending; later ones only grow the gap.
                break;
            }
        }
        chosen.push(t);
        if assign_stamps(adj, seq, delta, position + 1, Some(t), chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn enumerate_sequences(
    adj: &StaticAdjacency,
    q: &RestlessQuery<'_>,
    seq: &mut Vec<VertexId>,
    on_path: &mut Vec<bool>,
) -> Option<TemporalWalk> {
    let here = *seq.last().expect("sequence nonempty");
    if here == q.target() {
        let mut stamps = Vec::with_capacity(seq.len() - 1);
        if assign_stamps(adj, seq, q.delta(), 0, None, &mut stamps) {
            let steps = seq
                .windows(2)
                .zip(stamps)
                .map(|(pair, t)| WalkStep::new(pair[0], pair[1], t))
                .collect();
            return Some(TemporalWalk::from_steps(steps));
        }
        return None;
    }
    for &next in &adj.neighbors[here.index()] {
        if on_path[next.index()] {
            continue;
        }
        seq.push(next);
        on_path[next.index()] = true;
        let found = enumerate_sequences(adj, q, seq, on_path);
        seq.pop();
        on_path[next.index()] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Restless path oracle: enumerates vertex-distinct sequences from source to
/// target in ascending-neighbor order and, per sequence, compatible stamp
/// assignments. Shares no code with the production path search.
pub fn path_bruteforce(q: &RestlessQuery<'_>) -> Result<Option<TemporalWalk>, OracleError> {
    let n = q.graph().vertex_count();
    if n > PATH_VERTEX_GUARD {
        return Err(OracleError::GuardExceeded {
            what: "vertex count",
            limit: PATH_VERTEX_GUARD,
            actual: n,
        });
    }
    let adj = StaticAdjacency::new(q.graph());
    let mut seq = vec![q.source()];
    let mut on_path = vec![false; n];
    on_path[q.source().index()] = true;
    Ok(enumerate_sequences(&adj, q, &mut seq, &mut on_path))
}

/// Bounded restless walk enumeration: depth-first over directed time-edge
/// sequences of length at most `max_len`, never reusing a directed time
/// edge. A shortest restless walk never traverses the same directed time
/// edge twice (splicing out the loop between two uses leaves a valid walk),
/// so with `max_len >= 2 * |time edges|` the enumeration is exhaustive.
pub fn walk_bruteforce(
    q: &RestlessQuery<'_>,
    max_len: usize,
) -> Result<Option<TemporalWalk>, OracleError> {
    let mut nodes: Vec<WalkStep> = Vec::new();
    for e in q.graph().time_edges() {
        nodes.push(WalkStep::new(e.u(), e.v(), e.time()));
        nodes.push(WalkStep::new(e.v(), e.u(), e.time()));
    }
    nodes.sort_by_key(|s| (s.time, s.from, s.to));
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); q.graph().vertex_count()];
    for (i, s) in nodes.iter().enumerate() {
        out[s.from.index()].push(i);
    }

    struct Enumerator<'a> {
        nodes: &'a [WalkStep],
        out: &'a [Vec<usize>],
        target: VertexId,
        delta: u32,
        max_len: usize,
        used: Vec<bool>,
        sequence: Vec<usize>,
        visited_nodes: usize,
    }

    impl Enumerator<'_> {
        fn extend(&mut self) -> Result<bool, OracleError> {
            self.visited_nodes += 1;
            if self.visited_nodes > WALK_NODE_BUDGET {
                return Err(OracleError::BudgetExceeded {
                    budget: WALK_NODE_BUDGET,
                });
            }
            let &last = self.sequence.last().expect("nonempty");
            let step = self.nodes[last];
            if step.to == self.target {
                return Ok(true);
            }
            if self.sequence.len() == self.max_len {
                return Ok(false);
            }
            let hi = step.time.saturating_add(self.delta);
            for &j in &self.out[step.to.index()] {
                let next = self.nodes[j];
                if next.time < step.time || self.used[j] {
                    continue;
                }
                if next.time > hi {
                    break;
                }
                self.used[j] = true;
                self.sequence.push(j);
                if self.extend()? {
                    return Ok(true);
                }
                self.sequence.pop();
                self.used[j] = false;
            }
            Ok(false)
        }
    }

    let mut en = Enumerator {
        nodes: &nodes,
        out: &out,
        target: q.target(),
        delta: q.delta(),
        max_len: max_len.max(1),
        used: vec![false; nodes.len()],
        sequence: Vec::new(),
        visited_nodes: 0,
    };
    let starts: Vec<usize> = out[q.source().index()].clone();
    for i in starts {
        en.used[i] = true;
        en.sequence.push(i);
        if en.extend()? {
            let steps = en.sequence.iter().map(|&j| nodes[j]).collect();
            return Ok(Some(TemporalWalk::from_steps(steps)));
        }
        en.sequence.pop();
        en.used[i] = false;
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Seeded instance generators
// ---------------------------------------------------------------------------

/// Seeded random temporal graph: every (vertex pair, time step) slot becomes
/// a time edge independently with probability `density`. Identical seed and
/// parameters give identical graphs.
pub fn gen_graph(
    seed: u64,
    vertex_count: usize,
    lifetime: u32,
    density: f64,
) -> Result<TemporalGraph, OracleError> {
    if vertex_count == 0 || lifetime == 0 {
        return Err(OracleError::InvalidParams(
            "vertex count and lifetime must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(OracleError::InvalidParams(format!(
            "density {density} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = TemporalGraph::new(vertex_count, lifetime)
        .map_err(|e| OracleError::InvalidParams(e.to_string()))?;
    for t in 1..=lifetime {
        for u in 0..vertex_count as u32 {
            for v in (u + 1)..vertex_count as u32 {
                if rng.gen_bool(density) {
                    g.add_time_edge(u, v, t).expect("fresh slot");
                }
            }
        }
    }
    Ok(g)
}

/// Seeded random exists-forall CNF formula. Every clause draws a width in
/// `1..=clause_width` and that many distinct variables (duplicates are
/// re-drawn), each negated with probability 1/2.
pub fn gen_qbf(
    seed: u64,
    n_x: u32,
    n_y: u32,
    clause_count: usize,
    clause_width: usize,
) -> Result<QbfInstance, OracleError> {
    if n_x == 0 || n_y == 0 || clause_count == 0 || clause_width == 0 {
        return Err(OracleError::InvalidParams(
            "variable counts, clause count, and width must be positive".into(),
        ));
    }
    let total_vars = (n_x + n_y) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut clauses = Vec::with_capacity(clause_count);
    for _ in 0..clause_count {
        let width = rng.gen_range(1..=clause_width.min(total_vars));
        let mut vars: BTreeSet<u32> = BTreeSet::new();
        while vars.len() < width {
            vars.insert(rng.gen_range(0..total_vars as u32));
        }
        let clause = vars
            .into_iter()
            .map(|v| {
                let var = if v < n_x {
                    VarRef::X(v + 1)
                } else {
                    VarRef::Y(v - n_x + 1)
                };
                crate::reductions::Literal {
                    var,
                    negated: rng.gen_bool(0.5),
                }
            })
            .collect();
        clauses.push(clause);
    }
    QbfInstance::new(n_x, n_y, clauses).map_err(|e| OracleError::InvalidParams(e.to_string()))
}

/// Seeded random hitting-set instance with non-empty sets of size at most
/// `max_set_size`.
pub fn gen_hs(
    seed: u64,
    universe_size: u32,
    set_count: usize,
    max_set_size: usize,
    budget: u32,
) -> Result<HittingSetInstance, OracleError> {
    if universe_size == 0 || set_count == 0 || max_set_size == 0 {
        return Err(OracleError::InvalidParams(
            "universe, set count, and set size must be positive".into(),
        ));
    }
    if budget > universe_size {
        return Err(OracleError::InvalidParams(format!(
            "budget {budget} exceeds universe size {universe_size}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = Vec::with_capacity(set_count);
    for _ in 0..set_count {
        let size = rng.gen_range(1..=max_set_size.min(universe_size as usize));
        let mut set: BTreeSet<u32> = BTreeSet::new();
        while set.len() < size {
            set.insert(rng.gen_range(1..=universe_size));
        }
        sets.push(set);
    }
    HittingSetInstance::new(universe_size, sets, budget)
        .map_err(|e| OracleError::InvalidParams(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemporalGraph;
    use crate::reductions::Literal;

    fn lit_x(i: u32, negated: bool) -> Literal {
        Literal {
            var: VarRef::X(i),
            negated,
        }
    }

    fn lit_y(i: u32, negated: bool) -> Literal {
        Literal {
            var: VarRef::Y(i),
            negated,
        }
    }

    #[test]
    fn eaf_single_clause_with_x_escape() {
        // exists x forall y: (x or y) -- x = true works
        let q = QbfInstance::new(1, 1, vec![vec![lit_x(1, false), lit_y(1, false)]]).unwrap();
        assert_eq!(eaf_sat_witness(&q).unwrap(), Some(vec![true]));
    }

    #[test]
    fn eaf_pure_universal_clause_fails() {
        // exists x forall y: (y) -- y = false falsifies
        let q = QbfInstance::new(1, 1, vec![vec![lit_y(1, false)]]).unwrap();
        assert!(!eaf_sat_bruteforce(&q).unwrap());
    }

    #[test]
    fn eaf_two_clause_example() {
        // exists x forall y: (x or y) and (x or not y) -- x = true
        let q = QbfInstance::new(
            1,
            1,
            vec![
                vec![lit_x(1, false), lit_y(1, false)],
                vec![lit_x(1, false), lit_y(1, true)],
            ],
        )
        .unwrap();
        assert_eq!(eaf_sat_witness(&q).unwrap(), Some(vec![true]));
    }

    #[test]
    fn eaf_guard_rejects_large_instances() {
        let q = QbfInstance::new(20, 20, vec![vec![lit_x(1, false)]]).unwrap();
        assert!(matches!(
            eaf_sat_bruteforce(&q),
            Err(OracleError::GuardExceeded { .. })
        ));
    }

    #[test]
    fn hitting_set_prefers_shared_element() {
        let inst = HittingSetInstance::new(3, vec![[1, 2].into(), [2, 3].into()], 1).unwrap();
        assert_eq!(hitting_set_bruteforce(&inst).unwrap(), Some([2].into()));
    }

    #[test]
    fn hitting_set_detects_infeasible_budget() {
        let inst = HittingSetInstance::new(2, vec![[1].into(), [2].into()], 1).unwrap();
        assert_eq!(hitting_set_bruteforce(&inst).unwrap(), None);
    }

    #[test]
    fn hitting_set_empty_family_is_hit_by_empty_set() {
        let inst = HittingSetInstance::new(3, vec![], 0).unwrap();
        assert_eq!(hitting_set_bruteforce(&inst).unwrap(), Some(BTreeSet::new()));
    }

    #[test]
    fn path_oracle_matches_hand_checked_cases() {
        let g = TemporalGraph::with_edges(
            4,
            4,
            [(0, 1, 1), (1, 2, 2), (1, 2, 3), (1, 3, 4)],
        )
        .unwrap();
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(3), 1).unwrap();
        assert_eq!(path_bruteforce(&q).unwrap(), None);

        let row = TemporalGraph::with_edges(4, 1, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let q = RestlessQuery::new(&row, VertexId(0), VertexId(3), 1).unwrap();
        let w = path_bruteforce(&q).unwrap().expect("path");
        assert_eq!(w.len(), 3);

        let lonely = TemporalGraph::with_edges(4, 2, [(1, 2, 1)]).unwrap();
        let q = RestlessQuery::new(&lonely, VertexId(0), VertexId(3), 1).unwrap();
        assert_eq!(path_bruteforce(&q).unwrap(), None);
    }

    #[test]
    fn path_oracle_guard() {
        let g = TemporalGraph::new(11, 1).unwrap();
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(1), 1).unwrap();
        assert!(matches!(
            path_bruteforce(&q),
            Err(OracleError::GuardExceeded { .. })
        ));
    }

    #[test]
    fn walk_oracle_finds_the_revisiting_walk() {
        let g = TemporalGraph::with_edges(
            4,
            4,
            [(0, 1, 1), (1, 2, 2), (1, 2, 3), (1, 3, 4)],
        )
        .unwrap();
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(3), 1).unwrap();
        // no witness of length up to 3, one of length 4
        assert_eq!(walk_bruteforce(&q, 3).unwrap(), None);
        let w = walk_bruteforce(&q, 4).unwrap().expect("walk");
        assert_eq!(w.len(), 4);
    }

    #[test]
    fn walk_oracle_needs_reverse_reuse_of_a_time_edge() {
        // s=0, a=1, b=2, z=3: s-a@1, a-b@2, a-z@3. The only walk bounces
        // a -> b -> a over the same time edge and has length 4, one more
        // than the number of time edges.
        let g = TemporalGraph::with_edges(4, 3, [(0, 1, 1), (1, 2, 2), (1, 3, 3)]).unwrap();
        let q = RestlessQuery::new(&g, VertexId(0), VertexId(3), 1).unwrap();
        assert_eq!(walk_bruteforce(&q, 3).unwrap(), None);
        let w = walk_bruteforce(&q, 6).unwrap().expect("walk");
        assert_eq!(w.len(), 4);
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gen_graph(7, 6, 4, 0.3).unwrap();
        let b = gen_graph(7, 6, 4, 0.3).unwrap();
        assert_eq!(a, b);
        let qa = gen_qbf(11, 2, 2, 3, 3).unwrap();
        let qb = gen_qbf(11, 2, 2, 3, 3).unwrap();
        assert_eq!(qa, qb);
        let ha = gen_hs(13, 5, 4, 3, 2).unwrap();
        let hb = gen_hs(13, 5, 4, 3, 2).unwrap();
        assert_eq!(ha, hb);
        assert_ne!(gen_graph(8, 6, 4, 0.3).unwrap(), a);
    }

    #[test]
    fn generated_graphs_satisfy_invariants() {
        let g = gen_graph(3, 5, 3, 0.5).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.lifetime(), 3);
        for e in g.time_edges() {
            assert!(e.u() < e.v());
            assert!((1..=3).contains(&e.time()));
        }
    }

    #[test]
    fn generated_clauses_never_repeat_a_variable() {
        for seed in 0..50 {
            let q = gen_qbf(seed, 3, 3, 4, 4).unwrap();
            for clause in q.clauses() {
                let vars: BTreeSet<_> = clause.iter().map(|l| l.var).collect();
                assert_eq!(vars.len(), clause.len());
            }
        }
    }

    #[test]
    fn generator_parameter_validation() {
        assert!(gen_graph(1, 0, 3, 0.5).is_err());
        assert!(gen_graph(1, 3, 3, 1.5).is_err());
        assert!(gen_qbf(1, 0, 1, 1, 1).is_err());
        assert!(gen_hs(1, 3, 2, 0, 1).is_err());
        assert!(gen_hs(1, 3, 2, 2, 9).is_err());
    }
}
