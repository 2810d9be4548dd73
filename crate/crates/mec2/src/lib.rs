//! Exact solvers for the maximum 2-edge-colorable subgraph problem.
//!
//! A 2-edge-colorable subgraph is a union of two matchings: maximum degree at
//! most two with no odd-cycle component. This crate bundles, behind a shared
//! [`graph::Graph`] substrate:
//!
//! * brute-force oracles ([`oracle`]) that anchor every other solver,
//! * a constrained forest DP ([`forest`]) and the cycle-space engine built on
//!   it ([`cyclespace`]),
//! * a branch-decomposition DP with a tree-decomposition converter
//!   ([`decomp`], [`branchdp`]),
//! * the dense / Hamiltonian solver and the engine dispatcher ([`dense`]),
//! * iterative-compression solvers for edge and vertex deletion to
//!   2-edge-colorability ([`deletion`]),
//! * instance generators ([`generators`]) and text formats ([`formats`]).

pub mod branchdp;
pub mod cyclespace;
pub mod decomp;
pub mod deletion;
pub mod dense;
pub mod forest;
pub mod formats;
pub mod generators;
pub mod graph;
pub mod matching;
pub mod oracle;

pub use graph::{is_2ec_feasible, validate_coloring, EdgeColoring, Graph};
pub use matching::max_matching;
