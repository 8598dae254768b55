//! k-Detour on undirected graphs.
//!
//! A simple `s`–`t` path of length exactly `dist(s,t) + k` is detected with a
//! layered dynamic program over BFS depth from `s`. Its subroutines are an
//! algebraic sieve for paths with a prescribed bipartition signature,
//! evaluated over GF(2^64), and an exact-length path solver built on random
//! bipartitions. Brute-force oracles for every decision live in [`oracle`].

pub mod detour;
pub mod error;
pub mod field64;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod path_solver;
pub mod seed;
pub mod sieve;

pub use detour::{
    compute_offset_table, solve, Alpha, Case1Budget, DetourQuery, DetourRun, OffsetTable, RunStats,
};
pub use error::{Error, Result};
pub use field64::FieldElem;
pub use graph::{
    bfs_layers, random_partition, Bipartition, EdgeClass, Graph, LayeredGraph, Part, SubgraphView,
    ViewKind,
};
pub use path_solver::{exists_path_of_length, exists_path_upto, PathSolverConfig, Strategy};
pub use sieve::{decide, dp_state_count, evaluate_polynomial, SieveQuery, VarAssignment};
