#![forbid(unsafe_code)]

//! Temporal separation toolkit.
//!
//! A temporal graph keeps its vertex set fixed while edges come and go over
//! discrete time steps. A walk through such a graph is *restless* when it
//! may wait at most `delta` steps between consecutive edges, the natural
//! model for infection chains, where a carrier stops transmitting after a
//! recovery window. This crate decides and certifies three questions about
//! two designated terminals:
//!
//! * does a restless walk exist ([`restless::find_walk`], polynomial),
//! * does a restless path exist ([`restless::find_path`], exact search with
//!   an explicit budget),
//! * can deleting at most `k` non-terminal vertices destroy every restless
//!   path ([`separator::solve_bruteforce`], [`separator::solve_cegar`])?
//!
//! The [`reductions`] module compiles exists-forall CNF formulas and
//! hitting-set instances into equivalent separation instances and provides
//! the padding transformation that trades a larger waiting bound for extra
//! trivial layers. The [`oracles`] module holds independent brute-force
//! references and seeded generators against which everything else is
//! validated.

pub mod graph;
pub mod oracles;
pub mod reductions;
pub mod restless;
pub mod separator;

pub use graph::{parse_graph, write_graph, GraphError, TemporalGraph, TimeEdge, VertexId};
pub use reductions::{
    complement_path_instance, pad_delta, reduce_exists_forall_sat, reduce_hitting_set,
    HittingSetInstance, QbfInstance, ReducedInstance, ReductionError, VertexRole,
};
pub use restless::{
    check_path, check_walk, find_path, find_walk, verify_path, verify_walk, PathOutcome,
    RestlessQuery, TemporalWalk, WalkStep, Witness, WitnessKind,
};
pub use separator::{
    check_separator, solve_bruteforce, solve_cegar, verify_separator, Answer, Separator,
    SeparatorInstance, SolveOptions, SolveReport,
};
