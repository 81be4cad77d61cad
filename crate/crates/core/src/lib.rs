//! Counting simple cycles and simple paths of bounded length on (di)graphs by summing
//! signed walk counts over weakly connected induced subgraphs.
//!
//! The main entry points are [`sieve::count_cycles`], [`sieve::count_cycles_through`] and
//! [`sieve::count_paths`]. Label sequences of cycles and paths on vertex-labelled graphs are
//! in [`labeled`]; independent enumeration baselines live in [`baselines`]; the experiment
//! drivers used by the `cyclesieve` binary are in [`bench`].

pub mod arith;
pub mod baselines;
pub mod bench;
mod charpoly;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod io;
pub mod labeled;
mod powers;
pub mod sieve;

pub use enumerate::{
    count_connected_induced, enumerate_connected_induced, neighbor_count, Enumerator, SubgraphVisit,
};
pub use error::{Error, Result};
pub use graph::{DenseMatrix, Graph, GraphBuilder};
pub use sieve::{
    count_cycles, count_cycles_through, count_paths, verify_eq6, CountVector, CycleCounts,
    PathCounts, RootedCycleCounts, SieveOptions,
};
