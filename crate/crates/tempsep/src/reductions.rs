//! Executable hardness constructions: exists-forall CNF formulas and
//! hitting-set instances are compiled into restless separation instances,
//! plus the waiting-bound padding transformation and the zero-budget
//! complement wrapper.
//!
//! The exists-forall construction builds three blocks with waiting bound 1
//! and deletion budget `n_x`:
//!
//! * an *exists gadget*: one row `s - x_i_T - x_i_F - z` per existential
//!   variable, all at time 1, so any separator within budget must pick
//!   exactly one side per row, which selects an X-assignment (the `_T` side
//!   means "true");
//! * a *forall gadget*: a spine `s - s_1 - ... - s_{n_y+1}` that forks
//!   through `y_i_T` or `y_i_F` at each position, all at time 1, so each
//!   traversal is a Y-assignment;
//! * a *clause gadget*: a selection path `s_{n_y+1} - c_1_1 - c_1_2 - ...`
//!   on time stamps `2, 3, 4, ...` with, per clause `i`, an escape chain at
//!   time `2i+1` from `c_i_2` through the vertex of each literal's
//!   satisfying side to `z`. An escape chain is traversable exactly when no
//!   literal of the clause was "activated" (deleted for X, visited for Y),
//!   i.e. when the clause is falsified.
//!
//! The separator budget answer then matches the exists-forall answer, and a
//! winning X-assignment maps to a separator by selecting `x_i_T` for true
//! variables and `x_i_F` for false ones.

use crate::graph::{GraphError, TemporalGraph, VertexId};
use crate::separator::{InstanceError, Separator, SeparatorInstance};
use serde_json::json;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("clause {clause} contains variable {var} more than once")]
    RepeatedVariable { clause: usize, var: String },
    #[error("clause {clause} references {var} outside the declared ranges")]
    LiteralOutOfRange { clause: usize, var: String },
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("set {index} is empty")]
    EmptySet { index: usize },
    #[error("set {index} contains element {element} outside 1..={universe}")]
    ElementOutOfRange {
        index: usize,
        element: u32,
        universe: u32,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

// ---------------------------------------------------------------------------
// Problem inputs
// ---------------------------------------------------------------------------

/// Reference to an existential (`X`) or universal (`Y`) variable, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarRef {
    X(u32),
    Y(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: VarRef,
    pub negated: bool,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-")?;
        }
        match self.var {
            VarRef::X(i) => write!(f, "x{i}"),
            VarRef::Y(i) => write!(f, "y{i}"),
        }
    }
}

/// An exists-forall CNF formula: `n_x` existential variables, `n_y`
/// universal ones, and a clause list. No clause mentions a variable twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QbfInstance {
    n_x: u32,
    n_y: u32,
    clauses: Vec<Vec<Literal>>,
}

impl QbfInstance {
    pub fn new(n_x: u32, n_y: u32, clauses: Vec<Vec<Literal>>) -> Result<Self, ReductionError> {
        for (idx, clause) in clauses.iter().enumerate() {
            let number = idx + 1;
            let mut seen: BTreeSet<VarRef> = BTreeSet::new();
            for lit in clause {
                let in_range = match lit.var {
                    VarRef::X(i) => i >= 1 && i <= n_x,
                    VarRef::Y(i) => i >= 1 && i <= n_y,
                };
                if !in_range {
                    return Err(ReductionError::LiteralOutOfRange {
                        clause: number,
                        var: lit.to_string(),
                    });
                }
                if !seen.insert(lit.var) {
                    return Err(ReductionError::RepeatedVariable {
                        clause: number,
                        var: lit.to_string(),
                    });
                }
            }
        }
        Ok(QbfInstance { n_x, n_y, clauses })
    }

    pub fn n_x(&self) -> u32 {
        self.n_x
    }

    pub fn n_y(&self) -> u32 {
        self.n_y
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }
}

/// A hitting-set instance: universe `1..=universe_size`, a family of
/// non-empty subsets, and a budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSetInstance {
    universe_size: u32,
    sets: Vec<BTreeSet<u32>>,
    budget: u32,
}

impl HittingSetInstance {
    pub fn new(
        universe_size: u32,
        sets: Vec<BTreeSet<u32>>,
        budget: u32,
    ) -> Result<Self, ReductionError> {
        for (idx, set) in sets.iter().enumerate() {
            let number = idx + 1;
            if set.is_empty() {
                return Err(ReductionError::EmptySet { index: number });
            }
            for &e in set {
                if e == 0 || e > universe_size {
                    return Err(ReductionError::ElementOutOfRange {
                        index: number,
                        element: e,
                        universe: universe_size,
                    });
                }
            }
        }
        Ok(HittingSetInstance {
            universe_size,
            sets,
            budget,
        })
    }

    pub fn universe_size(&self) -> u32 {
        self.universe_size
    }

    pub fn sets(&self) -> &[BTreeSet<u32>] {
        &self.sets
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }
}

// ---------------------------------------------------------------------------
// Gadget vertex roles
// ---------------------------------------------------------------------------

/// Role of a vertex in a generated instance; bijective with the vertex ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexRole {
    Source,
    Target,
    /// `x_i_T`: deleting it assigns the existential variable `i` true.
    XTrue(u32),
    /// `x_i_F`: deleting it assigns the existential variable `i` false.
    XFalse(u32),
    /// Spine vertex `s_i` of the forall gadget.
    Spine(u32),
    /// `y_i_T`: visiting it assigns the universal variable `i` true.
    YTrue(u32),
    /// `y_i_F`: visiting it assigns the universal variable `i` false.
    YFalse(u32),
    /// Entry vertex `c_i_1` of clause `i` on the selection path.
    ClauseEntry(u32),
    /// Exit vertex `c_i_2` of clause `i`, start of its escape chain.
    ClauseExit(u32),
    /// Universe element vertex of the hitting-set construction.
    Element(u32),
}

impl fmt::Display for VertexRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexRole::Source => write!(f, "s"),
            VertexRole::Target => write!(f, "z"),
            VertexRole::XTrue(i) => write!(f, "x{i}_T"),
            VertexRole::XFalse(i) => write!(f, "x{i}_F"),
            VertexRole::Spine(i) => write!(f, "s{i}"),
            VertexRole::YTrue(i) => write!(f, "y{i}_T"),
            VertexRole::YFalse(i) => write!(f, "y{i}_F"),
            VertexRole::ClauseEntry(i) => write!(f, "c{i}_1"),
            VertexRole::ClauseExit(i) => write!(f, "c{i}_2"),
            VertexRole::Element(e) => write!(f, "u{e}"),
        }
    }
}

/// Bijection between generated vertex ids and their gadget roles.
#[derive(Debug, Clone)]
pub struct LabelMap {
    roles: Vec<VertexRole>,
    index: HashMap<VertexRole, VertexId>,
}

impl LabelMap {
    fn new(roles: Vec<VertexRole>) -> Self {
        let index = roles
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, VertexId(i as u32)))
            .collect();
        LabelMap { roles, index }
    }

    pub fn role(&self, v: VertexId) -> VertexRole {
        self.roles[v.index()]
    }

    pub fn vertex(&self, role: VertexRole) -> Option<VertexId> {
        self.index.get(&role).copied()
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn roles(&self) -> &[VertexRole] {
        &self.roles
    }
}

/// A generated separation instance together with its role map.
#[derive(Debug, Clone)]
pub struct ReducedInstance {
    pub instance: SeparatorInstance,
    pub labels: LabelMap,
}

impl ReducedInstance {
    /// JSON sidecar carried next to the graph file: terminals, budget,
    /// waiting bound, and the per-vertex labels.
    pub fn sidecar_json(&self) -> serde_json::Value {
        json!({
            "s": self.instance.source().0,
            "z": self.instance.target().0,
            "k": self.instance.k(),
            "delta": self.instance.delta(),
            "labels": self.instance.graph().labels(),
        })
    }
}

fn build_graph(
    roles: Vec<VertexRole>,
    lifetime: u32,
    edges: &[(VertexRole, VertexRole, u32)],
) -> Result<(TemporalGraph, LabelMap), ReductionError> {
    let labels = LabelMap::new(roles);
    let mut g = TemporalGraph::new(labels.len(), lifetime)?;
    for (i, role) in labels.roles().iter().enumerate() {
        g.set_label(VertexId(i as u32), role.to_string())?;
    }
    for &(a, b, t) in edges {
        let u = labels.vertex(a).expect("role present in table");
        let v = labels.vertex(b).expect("role present in table");
        g.add_time_edge(u.0, v.0, t)?;
    }
    Ok((g, labels))
}

// ---------------------------------------------------------------------------
// Exists-forall SAT -> separation
// ---------------------------------------------------------------------------

/// Vertex a literal's satisfying assignment corresponds to: deleting or
/// visiting it marks the literal satisfied, which blocks the clause's
/// escape chain.
fn satisfying_side(lit: Literal) -> VertexRole {
    match (lit.var, lit.negated) {
        (VarRef::X(i), false) => VertexRole::XTrue(i),
        (VarRef::X(i), true) => VertexRole::XFalse(i),
        (VarRef::Y(i), false) => VertexRole::YTrue(i),
        (VarRef::Y(i), true) => VertexRole::YFalse(i),
    }
}

/// Compiles an exists-forall CNF formula into a separation instance with
/// waiting bound 1, deletion budget `n_x`, and lifetime `2m + 1`.
///
/// Within each escape chain the X-literal vertices come first in ascending
/// variable order, then the Y-literal vertices in ascending order; a clause
/// without X-literals chains straight from its exit vertex into the first
/// Y vertex, and one without Y-literals chains from its last X vertex to the
/// target. Empty clauses are rejected.
pub fn reduce_exists_forall_sat(q: &QbfInstance) -> Result<ReducedInstance, ReductionError> {
    let n_x = q.n_x();
    let n_y = q.n_y();
    let m = q.clauses().len() as u32;
    for (idx, clause) in q.clauses().iter().enumerate() {
        if clause.is_empty() {
            return Err(ReductionError::EmptyClause { clause: idx + 1 });
        }
    }

    let mut roles = vec![VertexRole::Source, VertexRole::Target];
    for i in 1..=n_x {
        roles.push(VertexRole::XTrue(i));
        roles.push(VertexRole::XFalse(i));
    }
    for i in 1..=n_y + 1 {
        roles.push(VertexRole::Spine(i));
    }
    for i in 1..=n_y {
        roles.push(VertexRole::YTrue(i));
        roles.push(VertexRole::YFalse(i));
    }
    for i in 1..=m {
        roles.push(VertexRole::ClauseEntry(i));
        roles.push(VertexRole::ClauseExit(i));
    }

    let mut edges: Vec<(VertexRole, VertexRole, u32)> = Vec::new();

    // Exists gadget: one disjoint row per existential variable, time 1.
    for i in 1..=n_x {
        edges.push((VertexRole::Source, VertexRole::XTrue(i), 1));
        edges.push((VertexRole::XTrue(i), VertexRole::XFalse(i), 1));
        edges.push((VertexRole::XFalse(i), VertexRole::Target, 1));
    }

    // Forall gadget: spine with a true/false fork per universal variable,
    // time 1.
    edges.push((VertexRole::Source, VertexRole::Spine(1), 1));
    for i in 1..=n_y {
        edges.push((VertexRole::Spine(i), VertexRole::YTrue(i), 1));
        edges.push((VertexRole::Spine(i), VertexRole::YFalse(i), 1));
        edges.push((VertexRole::YTrue(i), VertexRole::Spine(i + 1), 1));
        edges.push((VertexRole::YFalse(i), VertexRole::Spine(i + 1), 1));
    }

    // Clause selection path: stamps 2, 3, 4, ..., 2m.
    if m >= 1 {
        edges.push((VertexRole::Spine(n_y + 1), VertexRole::ClauseEntry(1), 2));
    }
    for i in 1..=m {
        edges.push((VertexRole::ClauseEntry(i), VertexRole::ClauseExit(i), 2 * i + 1));
        if i < m {
            edges.push((VertexRole::ClauseExit(i), VertexRole::ClauseEntry(i + 1), 2 * i + 2));
        }
    }

    // Escape chains: clause i runs entirely at stamp 2i + 1.
    for (idx, clause) in q.clauses().iter().enumerate() {
        let i = idx as u32 + 1;
        let stamp = 2 * i + 1;
        let mut xs: Vec<Literal> = clause
            .iter()
            .copied()
            .filter(|l| matches!(l.var, VarRef::X(_)))
            .collect();
        let mut ys: Vec<Literal> = clause
            .iter()
            .copied()
            .filter(|l| matches!(l.var, VarRef::Y(_)))
            .collect();
        xs.sort_by_key(|l| l.var);
        ys.sort_by_key(|l| l.var);

        let mut chain = vec![VertexRole::ClauseExit(i)];
        chain.extend(xs.into_iter().map(satisfying_side));
        chain.extend(ys.into_iter().map(satisfying_side));
        chain.push(VertexRole::Target);
        for pair in chain.windows(2) {
            edges.push((pair[0], pair[1], stamp));
        }
    }

    let lifetime = 2 * m + 1;
    let (graph, labels) = build_graph(roles, lifetime, &edges)?;
    let source = labels.vertex(VertexRole::Source).expect("source exists");
    let target = labels.vertex(VertexRole::Target).expect("target exists");
    let instance = SeparatorInstance::new(graph, source, target, n_x as usize, 1)?;
    Ok(ReducedInstance { instance, labels })
}

/// Separator encoding of an X-assignment: `x_i_T` for true variables,
/// `x_i_F` for false ones.
pub fn separator_from_assignment(labels: &LabelMap, assignment: &[bool]) -> Separator {
    Separator::new(assignment.iter().enumerate().map(|(idx, &value)| {
        let i = idx as u32 + 1;
        let role = if value {
            VertexRole::XTrue(i)
        } else {
            VertexRole::XFalse(i)
        };
        labels.vertex(role).expect("existential row exists")
    }))
}

/// X-assignment encoded by a separator, when the separator selects exactly
/// one side per existential row and nothing else.
pub fn assignment_from_separator(
    labels: &LabelMap,
    n_x: u32,
    sep: &Separator,
) -> Option<Vec<bool>> {
    if sep.len() != n_x as usize {
        return None;
    }
    let mut assignment = Vec::with_capacity(n_x as usize);
    for i in 1..=n_x {
        let true_side = labels.vertex(VertexRole::XTrue(i))?;
        let false_side = labels.vertex(VertexRole::XFalse(i))?;
        match (
            sep.vertices().contains(&true_side),
            sep.vertices().contains(&false_side),
        ) {
            (true, false) => assignment.push(true),
            (false, true) => assignment.push(false),
            _ => return None,
        }
    }
    Some(assignment)
}

/// Vertex pairs of `g` carrying more than one time stamp, with their stamps.
pub fn multi_stamp_pairs(g: &TemporalGraph) -> Vec<((VertexId, VertexId), Vec<u32>)> {
    let mut stamps: HashMap<(VertexId, VertexId), Vec<u32>> = HashMap::new();
    for e in g.time_edges() {
        stamps.entry(e.endpoints()).or_default().push(e.time());
    }
    let mut out: Vec<_> = stamps.into_iter().filter(|(_, ts)| ts.len() > 1).collect();
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// Hitting set -> separation
// ---------------------------------------------------------------------------

/// Compiles a hitting-set instance into a separation instance: element
/// vertices plus the two terminals, lifetime `2m`, waiting bound 1. Layer
/// `2i - 1` is a single source-to-target path through the elements of set
/// `i` in ascending order; every even layer is empty, so restless paths
/// correspond exactly to sets. The deletion budget is the hitting budget
/// (capped at the universe size, beyond which it is vacuous).
pub fn reduce_hitting_set(h: &HittingSetInstance) -> Result<ReducedInstance, ReductionError> {
    let m = h.sets().len() as u32;
    let mut roles = vec![VertexRole::Source, VertexRole::Target];
    for e in 1..=h.universe_size() {
        roles.push(VertexRole::Element(e));
    }

    let mut edges: Vec<(VertexRole, VertexRole, u32)> = Vec::new();
    for (idx, set) in h.sets().iter().enumerate() {
        let stamp = 2 * (idx as u32 + 1) - 1;
        let mut chain = vec![VertexRole::Source];
        chain.extend(set.iter().map(|&e| VertexRole::Element(e)));
        chain.push(VertexRole::Target);
        for pair in chain.windows(2) {
            edges.push((pair[0], pair[1], stamp));
        }
    }

    let lifetime = (2 * m).max(1);
    let (graph, labels) = build_graph(roles, lifetime, &edges)?;
    let source = labels.vertex(VertexRole::Source).expect("source exists");
    let target = labels.vertex(VertexRole::Target).expect("target exists");
    let k = (h.budget() as usize).min(h.universe_size() as usize);
    let instance = SeparatorInstance::new(graph, source, target, k, 1)?;
    Ok(ReducedInstance { instance, labels })
}

/// Universe elements selected by a separator of a hitting-set reduction.
pub fn hitting_set_from_separator(labels: &LabelMap, sep: &Separator) -> BTreeSet<u32> {
    sep.vertices()
        .iter()
        .filter_map(|&v| match labels.role(v) {
            VertexRole::Element(e) => Some(e),
            _ => None,
        })
        .collect()
}

/// Separator selecting the element vertices of a hitting set.
pub fn separator_from_hitting_set(labels: &LabelMap, hitting: &BTreeSet<u32>) -> Separator {
    Separator::new(
        hitting
            .iter()
            .map(|&e| labels.vertex(VertexRole::Element(e)).expect("element exists")),
    )
}

// ---------------------------------------------------------------------------
// Padding and complement
// ---------------------------------------------------------------------------

/// Inserts one empty layer after every `delta` consecutive layers by mapping
/// stamp `t` to `t + (t - 1) / delta`; the lifetime grows to
/// `l + l / delta`. The graph has a `delta`-restless source-target path
/// exactly when the padded graph has a `(delta + 1)`-restless one.
pub fn pad_delta(g: &TemporalGraph, delta: u32) -> Result<TemporalGraph, ReductionError> {
    if delta == 0 || delta > g.lifetime() {
        return Err(ReductionError::Graph(GraphError::TimeOutOfRange {
            time: delta,
            lifetime: g.lifetime(),
        }));
    }
    let lifetime = g.lifetime() + g.lifetime() / delta;
    let mut padded = TemporalGraph::new(g.vertex_count(), lifetime)?;
    for v in g.vertices() {
        padded.set_label(v, g.label(v))?;
    }
    for e in g.time_edges() {
        let t = e.time() + (e.time() - 1) / delta;
        padded.add_time_edge(e.u().0, e.v().0, t)?;
    }
    Ok(padded)
}

/// The zero-budget separation instance whose YES answer says "no restless
/// path exists": the complement of the path-existence question.
pub fn complement_path_instance(
    g: &TemporalGraph,
    source: VertexId,
    target: VertexId,
    delta: u32,
) -> Result<SeparatorInstance, InstanceError> {
    SeparatorInstance::new(g.clone(), source, target, 0, delta)
}

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------

/// Parses the QDIMACS-flavored format: a `p cnf <vars> <clauses>` header, an
/// `e` line listing the existential variables, an `a` line listing the
/// universal ones (both 0-terminated), then one 0-terminated clause per
/// line. `c` lines are comments. Variables are renumbered so that the i-th
/// smallest `e`-variable becomes `x_i` and likewise for `y`.
pub fn parse_qdimacs(text: &str) -> Result<QbfInstance, ReductionError> {
    let mut declared: Option<(u32, usize)> = None;
    let mut exists: Option<Vec<u32>> = None;
    let mut forall: Option<Vec<u32>> = None;
    let mut raw_clauses: Vec<(usize, Vec<i64>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let err = |message: String| ReductionError::Parse {
            line: lineno,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "p" {
            if declared.is_some() {
                return Err(err("duplicate `p` line".into()));
            }
            if fields.len() != 4 || fields[1] != "cnf" {
                return Err(err("expected `p cnf <vars> <clauses>`".into()));
            }
            let vars: u32 = fields[2]
                .parse()
                .map_err(|_| err(format!("invalid variable count `{}`", fields[2])))?;
            let clauses: usize = fields[3]
                .parse()
                .map_err(|_| err(format!("invalid clause count `{}`", fields[3])))?;
            declared = Some((vars, clauses));
            continue;
        }
        if declared.is_none() {
            return Err(err("`p cnf` header must come first".into()));
        }
        let quantifier = match fields[0] {
            "e" => Some(&mut exists),
            "a" => Some(&mut forall),
            _ => None,
        };
        if let Some(slot) = quantifier {
            if slot.is_some() {
                return Err(err(format!("duplicate `{}` line", fields[0])));
            }
            if !raw_clauses.is_empty() {
                return Err(err("quantifier line after clauses".into()));
            }
            let mut vars = Vec::new();
            let mut terminated = false;
            for f in &fields[1..] {
                let v: i64 = f
                    .parse()
                    .map_err(|_| err(format!("invalid variable `{f}`")))?;
                if v == 0 {
                    terminated = true;
                    break;
                }
                if v < 0 {
                    return Err(err("negated variable in quantifier line".into()));
                }
                vars.push(v as u32);
            }
            if !terminated {
                return Err(err("quantifier line not terminated by 0".into()));
            }
            *slot = Some(vars);
            continue;
        }
        let mut lits = Vec::new();
        let mut terminated = false;
        for f in &fields {
            let v: i64 = f
                .parse()
                .map_err(|_| err(format!("invalid literal `{f}`")))?;
            if v == 0 {
                terminated = true;
                break;
            }
            lits.push(v);
        }
        if !terminated {
            return Err(err("clause not terminated by 0".into()));
        }
        raw_clauses.push((lineno, lits));
    }

    let (vars, clause_count) = declared.ok_or(ReductionError::Parse {
        line: 0,
        message: "missing `p cnf` header".into(),
    })?;
    let exists = exists.unwrap_or_default();
    let forall = forall.unwrap_or_default();
    let mut mapping: HashMap<u32, VarRef> = HashMap::new();
    let mut sorted_exists = exists.clone();
    sorted_exists.sort_unstable();
    sorted_exists.dedup();
    if sorted_exists.len() != exists.len() {
        return Err(ReductionError::Parse {
            line: 0,
            message: "duplicate variable in `e` line".into(),
        });
    }
    let mut sorted_forall = forall.clone();
    sorted_forall.sort_unstable();
    sorted_forall.dedup();
    if sorted_forall.len() != forall.len() {
        return Err(ReductionError::Parse {
            line: 0,
            message: "duplicate variable in `a` line".into(),
        });
    }
    for (pos, &v) in sorted_exists.iter().enumerate() {
        mapping.insert(v, VarRef::X(pos as u32 + 1));
    }
    for (pos, &v) in sorted_forall.iter().enumerate() {
        if mapping.insert(v, VarRef::Y(pos as u32 + 1)).is_some() {
            return Err(ReductionError::Parse {
                line: 0,
                message: format!("variable {v} is both existential and universal"),
            });
        }
    }
    for v in 1..=vars {
        if !mapping.contains_key(&v) {
            return Err(ReductionError::Parse {
                line: 0,
                message: format!("variable {v} is not quantified"),
            });
        }
    }
    if mapping.len() as u32 != vars {
        return Err(ReductionError::Parse {
            line: 0,
            message: format!(
                "{} quantified variables for {} declared",
                mapping.len(),
                vars
            ),
        });
    }
    if raw_clauses.len() != clause_count {
        return Err(ReductionError::Parse {
            line: 0,
            message: format!(
                "header declares {clause_count} clauses, found {}",
                raw_clauses.len()
            ),
        });
    }

    let mut clauses = Vec::with_capacity(raw_clauses.len());
    for (lineno, lits) in raw_clauses {
        let mut clause = Vec::with_capacity(lits.len());
        for lit in lits {
            let var = lit.unsigned_abs() as u32;
            let var_ref = mapping.get(&var).copied().ok_or(ReductionError::Parse {
                line: lineno,
                message: format!("literal {lit} references undeclared variable {var}"),
            })?;
            clause.push(Literal {
                var: var_ref,
                negated: lit < 0,
            });
        }
        clauses.push(clause);
    }
    QbfInstance::new(
        sorted_exists.len() as u32,
        sorted_forall.len() as u32,
        clauses,
    )
}

/// Canonical QDIMACS rendering: existential variables are `1..=n_x`,
/// universal ones follow.
pub fn write_qdimacs(q: &QbfInstance) -> String {
    let mut out = String::new();
    let vars = q.n_x() + q.n_y();
    out.push_str(&format!("p cnf {} {}\n", vars, q.clauses().len()));
    if q.n_x() > 0 {
        out.push('e');
        for i in 1..=q.n_x() {
            out.push_str(&format!(" {i}"));
        }
        out.push_str(" 0\n");
    }
    if q.n_y() > 0 {
        out.push('a');
        for i in 1..=q.n_y() {
            out.push_str(&format!(" {}", q.n_x() + i));
        }
        out.push_str(" 0\n");
    }
    for clause in q.clauses() {
        for lit in clause {
            let index = match lit.var {
                VarRef::X(i) => i,
                VarRef::Y(i) => q.n_x() + i,
            } as i64;
            out.push_str(&format!("{} ", if lit.negated { -index } else { index }));
        }
        out.push_str("0\n");
    }
    out
}

/// Parses the hitting-set format: `hs <universe> <m> <h>` then one line of
/// space-separated element ids per set. `#` lines are comments.
pub fn parse_hitting_set(text: &str) -> Result<HittingSetInstance, ReductionError> {
    let mut header: Option<(u32, usize, u32)> = None;
    let mut header_line = 0usize;
    let mut sets: Vec<BTreeSet<u32>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| ReductionError::Parse {
            line: lineno,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if header.is_none() {
            if fields.len() != 4 || fields[0] != "hs" {
                return Err(err("expected header `hs <universe> <m> <h>`".into()));
            }
            let u: u32 = fields[1]
                .parse()
                .map_err(|_| err(format!("invalid universe size `{}`", fields[1])))?;
            let m: usize = fields[2]
                .parse()
                .map_err(|_| err(format!("invalid set count `{}`", fields[2])))?;
            let h: u32 = fields[3]
                .parse()
                .map_err(|_| err(format!("invalid budget `{}`", fields[3])))?;
            header = Some((u, m, h));
            header_line = lineno;
            continue;
        }
        let mut set = BTreeSet::new();
        for f in fields {
            let e: u32 = f
                .parse()
                .map_err(|_| err(format!("invalid element `{f}`")))?;
            set.insert(e);
        }
        sets.push(set);
    }

    let (universe, m, h) = header.ok_or(ReductionError::Parse {
        line: 0,
        message: "missing `hs` header".into(),
    })?;
    if sets.len() != m {
        return Err(ReductionError::Parse {
            line: header_line,
            message: format!("header declares {m} sets, found {}", sets.len()),
        });
    }
    HittingSetInstance::new(universe, sets, h)
}

pub fn write_hitting_set(h: &HittingSetInstance) -> String {
    let mut out = format!(
        "hs {} {} {}\n",
        h.universe_size(),
        h.sets().len(),
        h.budget()
    );
    for set in h.sets() {
        let line: Vec<String> = set.iter().map(u32::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{eaf_sat_witness, hitting_set_bruteforce};
    use crate::separator::{solve_bruteforce, verify_separator, Answer, SolveOptions};

    fn lit(var: VarRef, negated: bool) -> Literal {
        Literal { var, negated }
    }

    fn x(i: u32) -> Literal {
        lit(VarRef::X(i), false)
    }

    fn not_x(i: u32) -> Literal {
        lit(VarRef::X(i), true)
    }

    fn y(i: u32) -> Literal {
        lit(VarRef::Y(i), false)
    }

    fn not_y(i: u32) -> Literal {
        lit(VarRef::Y(i), true)
    }

    #[test]
    fn reduction_shape_matches_formula_dimensions() {
        for (n_x, n_y, m) in [(1u32, 1u32, 1u32), (2, 2, 2), (3, 1, 4)] {
            let clauses = (0..m).map(|_| vec![x(1), y(1)]).collect();
            let q = QbfInstance::new(n_x, n_y, clauses).unwrap();
            let reduced = reduce_exists_forall_sat(&q).unwrap();
            let inst = &reduced.instance;
            assert_eq!(inst.graph().lifetime(), 2 * m + 1);
            assert_eq!(inst.k(), n_x as usize);
            assert_eq!(inst.delta(), 1);
            let expected_vertices = 2 + 2 * n_x + 2 * n_y + (n_y + 1) + 2 * m;
            assert_eq!(inst.graph().vertex_count(), expected_vertices as usize);
        }
    }

    #[test]
    fn smallest_formula_gives_ten_vertices() {
        let q = QbfInstance::new(1, 1, vec![vec![x(1), y(1)]]).unwrap();
        let reduced = reduce_exists_forall_sat(&q).unwrap();
        assert_eq!(reduced.instance.graph().vertex_count(), 10);
    }

    #[test]
    fn escape_chain_visits_satisfying_sides_in_order() {
        // Second clause (-x2 or x3 or -y2 or y3) in a 3+3 variable formula:
        // its chain runs at stamp 5 through x2_F, x3_T, y2_F, y3_T.
        let q = QbfInstance::new(
            3,
            3,
            vec![
                vec![x(1), y(1)],
                vec![not_x(2), x(3), not_y(2), y(3)],
            ],
        )
        .unwrap();
        let reduced = reduce_exists_forall_sat(&q).unwrap();
        let g = reduced.instance.graph();
        let v = |role| reduced.labels.vertex(role).unwrap();
        let chain = [
            v(VertexRole::ClauseExit(2)),
            v(VertexRole::XFalse(2)),
            v(VertexRole::XTrue(3)),
            v(VertexRole::YFalse(2)),
            v(VertexRole::YTrue(3)),
            v(VertexRole::Target),
        ];
        for pair in chain.windows(2) {
            assert!(
                g.contains_time_edge(pair[0], pair[1], 5),
                "missing chain edge {} - {} at stamp 5",
                g.label(pair[0]),
                g.label(pair[1])
            );
        }
    }

    #[test]
    fn clause_without_x_literals_chains_from_exit_to_first_y_vertex() {
        let q = QbfInstance::new(1, 2, vec![vec![y(1), not_y(2)]]).unwrap();
        let reduced = reduce_exists_forall_sat(&q).unwrap();
        let g = reduced.instance.graph();
        let v = |role| reduced.labels.vertex(role).unwrap();
        assert!(g.contains_time_edge(v(VertexRole::ClauseExit(1)), v(VertexRole::YTrue(1)), 3));
        assert!(g.contains_time_edge(v(VertexRole::YTrue(1)), v(VertexRole::YFalse(2)), 3));
        assert!(g.contains_time_edge(v(VertexRole::YFalse(2)), v(VertexRole::Target), 3));
    }

    #[test]
    fn clause_without_y_literals_chains_from_last_x_vertex_to_target() {
        let q = QbfInstance::new(2, 1, vec![vec![x(1), not_x(2)]]).unwrap();
        let reduced = reduce_exists_forall_sat(&q).unwrap();
        let g = reduced.instance.graph();
        let v = |role| reduced.labels.vertex(role).unwrap();
        assert!(g.contains_time_edge(v(VertexRole::ClauseExit(1)), v(VertexRole::XTrue(1)), 3));
        assert!(g.contains_time_edge(v(VertexRole::XTrue(1)), v(VertexRole::XFalse(2)), 3));
        assert!(g.contains_time_edge(v(VertexRole::XFalse(2)), v(VertexRole::Target), 3));
    }

    #[test]
    fn clauseless_formula_reduces_to_a_yes_instance() {
        // no clause gadget at all: lifetime 1, and any one-per-row set works
        let q = QbfInstance::new(2, 1, vec![]).unwrap();
        let reduced = reduce_exists_forall_sat(&q).unwrap();
        assert_eq!(reduced.instance.graph().lifetime(), 1);
        assert_eq!(reduced.instance.k(), 2);
        let report = solve_bruteforce(&reduced.instance, &SolveOptions::default());
        assert!(report.answer.is_yes());
    }

    #[test]
    fn purely_universal_formula_matches_validity() {
        //n_x = 0 makes the budget zero: YES exactly when every Y-assignment
        // satisfies the formula.
        let valid = QbfInstance::new(0, 1, vec![vec![y(1), not_y(1)]]);
        assert!(matches!(valid, Err(ReductionError::RepeatedVariable { .. })));

        let tautology_free = QbfInstance::new(0, 2, vec![vec![y(1), y(2)]]).unwrap();
        let reduced = reduce_exists_forall_sat(&tautology_free).unwrap();
        assert_eq!(reduced.instance.k(), 0);
        let report = solve_bruteforce(&reduced.instance, &SolveOptions::default());
        assert_eq!(report.answer, Answer::No);

        let one_sided = QbfInstance::new(0, 1, vec![vec![y(1)], vec![not_y(1)]]).unwrap();
        let reduced = reduce_exists_forall_sat(&one_sided).unwrap();
        let report = solve_bruteforce(&reduced.instance, &SolveOptions::default());
        assert_eq!(report.answer, Answer::No);
    }

    #[test]
    fn empty_clause_is_rejected() {
        let q = QbfInstance::new(1, 1, vec![vec![]]).unwrap();
        assert!(matches!(
            reduce_exists_forall_sat(&q),
            Err(ReductionError::EmptyClause { clause: 1 })
        ));
    }

    #[test]
    fn repeated_variable_is_rejected_at_construction() {
        assert!(matches!(
            QbfInstance::new(2, 1, vec![vec![x(1), not_x(1)]]),
            Err(ReductionError::RepeatedVariable { clause: 1, .. })
        ));
    }

    #[test]
    fn winning_assignment_yields_a_separator() {
        // exists x1 forall y1: (x1 or y1) and (x1 or not y1); x1 = true wins.
        let q = QbfInstance::new(
            1,
            1,
            vec![vec![x(1), y(1)], vec![x(1), not_y(1)]],
        )
        .unwrap();
        let assignment = eaf_sat_witness(&q).unwrap().expect("satisfiable");
        assert_eq!(assignment, vec![true]);
        let reduced = reduce_exists_forall_sat(&q).unwrap();
        let sep = separator_from_assignment(&reduced.labels, &assignment);
        assert_eq!(verify_separator(&reduced.instance, &sep), Ok(true));

        // the solver also finds exactly that separator first
        let report = solve_bruteforce(&reduced.instance, &SolveOptions::default());
        match &report.answer {
            Answer::Yes(found) => {
                let x1t = reduced.labels.vertex(VertexRole::XTrue(1)).unwrap();
                assert_eq!(found.vertices().iter().copied().collect::<Vec<_>>(), vec![x1t]);
            }
            other => panic!("expected yes, got {other:?}"),
        }
        assert_eq!(
            assignment_from_separator(&reduced.labels, 1, report.answer.separator().unwrap()),
            Some(vec![true])
        );
    }

    #[test]
    fn losing_side_vertex_is_not_a_separator() {
        let q = QbfInstance::new(
            1,
            1,
            vec![vec![x(1), y(1)], vec![x(1), not_y(1)]],
        )
        .unwrap();
        let reduced = reduce_exists_forall_sat(&q).unwrap();
        let sep = separator_from_assignment(&reduced.labels, &[false]);
        assert_eq!(verify_separator(&reduced.instance, &sep), Ok(false));
    }

    #[test]
    fn single_clause_reduction_round_trips_through_text() {
        let q = QbfInstance::new(1, 1, vec![vec![x(1), not_y(1)]]).unwrap();
        let reduced = reduce_exists_forall_sat(&q).unwrap();
        let text = crate::graph::write_graph(reduced.instance.graph());
        let parsed = crate::graph::parse_graph(&text).unwrap();
        assert_eq!(&parsed, reduced.instance.graph());
    }

    #[test]
    fn multi_stamp_report_finds_shared_chain_tails() {
        // (x1 or y1) and (x2 or y1): both chains end with the y1_T - z edge,
        // at stamps 3 and 5.
        let q = QbfInstance::new(2, 1, vec![vec![x(1), y(1)], vec![x(2), y(1)]]).unwrap();
        let reduced = reduce_exists_forall_sat(&q).unwrap();
        let pairs = multi_stamp_pairs(reduced.instance.graph());
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].1, vec![3, 5]);

        // a single clause cannot collide with anything
        let q = QbfInstance::new(2, 2, vec![vec![x(1), not_x(2), y(1), not_y(2)]]).unwrap();
        let reduced = reduce_exists_forall_sat(&q).unwrap();
        assert!(multi_stamp_pairs(reduced.instance.graph()).is_empty());
    }

    #[test]
    fn hitting_set_reduction_layout() {
        let h = HittingSetInstance::new(3, vec![[1, 2].into(), [2, 3].into()], 1).unwrap();
        let reduced = reduce_hitting_set(&h).unwrap();
        let inst = &reduced.instance;
        assert_eq!(inst.graph().lifetime(), 4);
        assert_eq!(inst.graph().vertex_count(), 5);
        assert_eq!(inst.k(), 1);
        assert_eq!(inst.delta(), 1);
        let v = |role| reduced.labels.vertex(role).unwrap();
        let (s, z) = (v(VertexRole::Source), v(VertexRole::Target));
        let (u1, u2, u3) = (
            v(VertexRole::Element(1)),
            v(VertexRole::Element(2)),
            v(VertexRole::Element(3)),
        );
        let layer1 = inst.graph().layer(1).unwrap();
        assert_eq!(layer1.len(), 3);
        for (a, b) in [(s, u1), (u1, u2), (u2, z)] {
            assert!(inst.graph().contains_time_edge(a, b, 1));
        }
        assert!(inst.graph().layer(2).unwrap().is_empty());
        let layer3 = inst.graph().layer(3).unwrap();
        assert_eq!(layer3.len(), 3);
        for (a, b) in [(s, u2), (u2, u3), (u3, z)] {
            assert!(inst.graph().contains_time_edge(a, b, 3));
        }
        assert!(inst.graph().layer(4).unwrap().is_empty());
    }

    #[test]
    fn single_set_reduction_has_lifetime_two() {
        let h = HittingSetInstance::new(2, vec![[1].into()], 1).unwrap();
        let reduced = reduce_hitting_set(&h).unwrap();
        assert_eq!(reduced.instance.graph().lifetime(), 2);
    }

    #[test]
    fn zero_budget_hitting_set_reduction_is_a_no() {
        let h = HittingSetInstance::new(2, vec![[1].into()], 0).unwrap();
        let reduced = reduce_hitting_set(&h).unwrap();
        let report = solve_bruteforce(&reduced.instance, &SolveOptions::default());
        assert_eq!(report.answer, Answer::No);
    }

    #[test]
    fn shared_element_separates_the_example_family() {
        let h = HittingSetInstance::new(3, vec![[1, 2].into(), [2, 3].into()], 1).unwrap();
        let reduced = reduce_hitting_set(&h).unwrap();
        let hitting = hitting_set_bruteforce(&h).unwrap().expect("hittable");
        let sep = separator_from_hitting_set(&reduced.labels, &hitting);
        assert_eq!(verify_separator(&reduced.instance, &sep), Ok(true));
        assert_eq!(hitting_set_from_separator(&reduced.labels, &sep), hitting);
    }

    #[test]
    fn empty_set_in_family_is_rejected() {
        assert!(matches!(
            HittingSetInstance::new(3, vec![BTreeSet::new()], 1),
            Err(ReductionError::EmptySet { index: 1 })
        ));
    }

    #[test]
    fn padding_remaps_stamps_and_lifetime() {
        let g = TemporalGraph::with_edges(
            2,
            4,
            [(0, 1, 1), (0, 1, 2), (0, 1, 3), (0, 1, 4)],
        )
        .unwrap();
        let padded = pad_delta(&g, 2).unwrap();
        assert_eq!(padded.lifetime(), 6);
        let stamps: Vec<u32> = padded.time_edges().map(|e| e.time()).collect();
        assert_eq!(stamps, vec![1, 2, 4, 5]);
    }

    #[test]
    fn padding_with_delta_equal_lifetime_appends_one_trivial_layer() {
        let g = TemporalGraph::with_edges(2, 3, [(0, 1, 1), (0, 1, 3)]).unwrap();
        let padded = pad_delta(&g, 3).unwrap();
        assert_eq!(padded.lifetime(), 4);
        let stamps: Vec<u32> = padded.time_edges().map(|e| e.time()).collect();
        assert_eq!(stamps, vec![1, 3]);
    }

    #[test]
    fn complement_instance_has_zero_budget() {
        let g = TemporalGraph::with_edges(2, 1, [(0, 1, 1)]).unwrap();
        let inst = complement_path_instance(&g, VertexId(0), VertexId(1), 1).unwrap();
        assert_eq!(inst.k(), 0);
        let report = solve_bruteforce(&inst, &SolveOptions::default());
        assert_eq!(report.answer, Answer::No);

        let empty = TemporalGraph::new(2, 1).unwrap();
        let inst = complement_path_instance(&empty, VertexId(0), VertexId(1), 1).unwrap();
        let report = solve_bruteforce(&inst, &SolveOptions::default());
        assert!(report.answer.is_yes());
    }

    #[test]
    fn qdimacs_round_trip_and_remapping() {
        let q = QbfInstance::new(
            2,
            2,
            vec![vec![x(1), not_y(2)], vec![not_x(2), y(1)]],
        )
        .unwrap();
        let text = write_qdimacs(&q);
        let back = parse_qdimacs(&text).unwrap();
        assert_eq!(back, q);

        // interleaved quantifier blocks are renumbered by sorted position
        let text = "c mixed\np cnf 4 1\ne 3 1 0\na 4 2 0\n-3 2 0\n";
        let q = parse_qdimacs(text).unwrap();
        assert_eq!(q.n_x(), 2);
        assert_eq!(q.n_y(), 2);
        assert_eq!(q.clauses()[0], vec![not_x(2), y(1)]);
    }

    #[test]
    fn qdimacs_errors() {
        assert!(parse_qdimacs("p cnf 2 1\ne 1 0\na 2 0\n1 2\n").is_err());
        assert!(parse_qdimacs("p cnf 2 1\ne 1 0\n1 0\n").is_err());
        assert!(parse_qdimacs("p cnf 2 2\ne 1 0\na 2 0\n1 0\n").is_err());
        assert!(parse_qdimacs("e 1 0\np cnf 1 0\n").is_err());
    }

    #[test]
    fn hitting_set_text_round_trip() {
        let h = HittingSetInstance::new(4, vec![[1, 3].into(), [2, 4].into()], 2).unwrap();
        let text = write_hitting_set(&h);
        assert_eq!(parse_hitting_set(&text).unwrap(), h);
        assert!(parse_hitting_set("hs 3 2 1\n1 2\n").is_err());
        assert!(parse_hitting_set("hs 3 1 1\n1 9\n").is_err());
    }
}
