//! Reachability of assignments under rational swaps.
//!
//! Agents sit on the vertices of a communication graph and each holds one
//! item; every agent finds some items acceptable. Two adjacent agents may
//! swap their items when both receive something acceptable. Given two
//! assignments `a` and `b`, the question is whether `b` can be reached from
//! `a`.
//!
//! On trees this is decided in polynomial time by [`solve_tree`], and
//! [`build_witness`] produces an explicit swap sequence for yes-instances.
//! The [`oracle`] module answers the question on any graph by exhaustive
//! search, and [`reduction`] embeds perfect matching reconfiguration into
//! the problem on complete graphs.

pub mod error;
pub mod format;
pub mod generator;
pub mod graph;
pub mod harness;
pub mod instance;
pub mod matching;
pub mod normalize;
pub mod oracle;
pub mod reduction;
pub mod rng;
pub mod stable_sets;
pub mod tree_solver;
pub mod witness;

pub use error::{Error, Result};
pub use format::{parse_instance, serialize, validate_instance, RawInstance};
pub use generator::{gen_instance, gen_pmr, GenSpec, Shape};
pub use harness::{run_bench, BenchConfig, Report, Row, Suite};
pub use instance::{apply_swap, legal_swap, replay, Agent, Assignment, Instance, Item, SwapMove};
pub use normalize::{normalize, ImmediateNo, Normalization};
pub use oracle::{
    brute_min_stable, bfs_reachable, enumerate_assignments, OracleResult, OracleStatus,
};
pub use reduction::{
    map_move_forward, map_sequence_backward, map_sequence_forward, matching_bfs, reduce_pmr,
    Exchange, PMRInstance,
};
pub use stable_sets::{
    f_value, is_stable, min_proper_stable, min_stable_containing, StableSet,
};
pub use tree_solver::{
    decompose, solve_tree, split_check, Component, CrossingItem, Decision, NoCertificate,
    SplitOutcome, YesCertificate,
};
pub use witness::{build_witness, stream_witness, ReconfigSequence, Region};
