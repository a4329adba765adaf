//! Coloring solver for conflict graphs whose color classes must induce
//! short paths: each color class, restricted to the fusable edges, has to
//! be a disjoint union of paths of at most `k` edges. The library provides
//! the graph model, tree decompositions, the dynamic program over nice
//! decompositions, brute-force oracles for cross-checking, and instance
//! generation and text formats.

pub mod clique;
pub mod decomp;
pub mod graph;
pub mod instances;
pub mod oracle;
pub mod solver;
pub mod trace;

pub use clique::{max_clique, CliqueResult, EXACT_CLIQUE_CAP};
pub use decomp::{
    exact_treewidth, from_pace_str, heuristic_decompose, make_nice, make_nice_rooted,
    to_pace_string, NiceTreeDecomposition, NodeKind, Strategy, TreeDecomposition,
};
pub use graph::{ClassViolation, ColorClassVerdict, Graph, GraphError};
pub use instances::{
    chain_graph, generate, parse_instance, serialize_instance, serialize_layout, stats, GenError,
    GenParams, Instance, InstanceStats, Layout, ParseError,
};
pub use oracle::{
    brute_force_chromatic, brute_force_chromatic_capped, brute_force_decide,
    brute_force_decide_capped, proper_chromatic_number, verify_coloring, Coloring, OracleError,
    VerificationReport, BRUTE_FORCE_CAP,
};
pub use solver::{
    chromatic_number, decide, decide_with_certificate, ops::PartialSolution, preprocess_split,
    recombine, SolveError, SolveOptions, SolveResult, SolveStats, SplitPlan,
};
pub use trace::{Shrunk, TraceError, TracePath};
