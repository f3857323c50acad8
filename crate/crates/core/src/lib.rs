//! Edge-pruning obfuscation for QAOA MaxCut.
//!
//! The crate builds QAOA circuits for a problem graph, prunes different edges
//! for different simulated backends, and optimizes one parameter vector while
//! alternating between them. It also carries the attacker's side: parsing a
//! received circuit, undoing SWAP routing and recovering the encoded graph.
//!
//! Modules, bottom-up:
//! - [`graph`] and [`benchmarks`]: problem graphs and the exact MaxCut oracle
//! - [`circuit`]: gate IR, QAOA builder, SWAP router, text wire format
//! - [`sim`]: statevector simulator with shot sampling and trajectory noise
//! - [`obfuscation`]: pruned flavors, split plans, the optimization loop
//! - [`adversary`]: graph extraction and reconstruction-effort bounds
//! - [`harness`]: experiment specs, result tables, overhead accounting

pub mod adversary;
pub mod benchmarks;
pub mod circuit;
pub mod graph;
pub mod harness;
pub mod obfuscation;
pub mod sim;

pub use benchmarks::{benchmark_graph, BenchmarkId};
pub use graph::{cut_value, max_cut_bruteforce, CutAssignment, Edge, Graph};
