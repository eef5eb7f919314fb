//! Learning-augmented approximation algorithms for selection problems.
//!
//! The crate is organised around a small number of layers:
//!
//! - [`graph`]: the weighted multigraph substrate with multi-source
//!   Dijkstra, Kruskal and connectivity checks.
//! - [`io`]: SteinLib/PACE `.stp` instances, edge/vertex/item set files,
//!   knapsack files and experiment CSV.
//! - [`blackbox`]: generic transforms that turn a conventional
//!   approximation algorithm into one that takes a (possibly infeasible)
//!   predicted solution, plus robustification and error accounting.
//! - [`cover`], [`knapsack`], [`steiner`]: concrete solvers built on top of
//!   the transforms, including ALPS (predicted-edge scaling on top of
//!   Mehlhorn's MST heuristic) and its α search.
//! - [`lab`]: synthetic and learned predictions, terminal-resampling
//!   instance distributions.
//! - [`oracles`]: exact solvers for small instances.
//! - [`experiment`]: the experiment harness behind the `alps` binary.

pub mod blackbox;
pub mod cover;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod knapsack;
pub mod lab;
pub mod oracles;
pub mod steiner;

pub use error::{Error, Result};
pub use graph::Graph;
pub use io::SteinerInstance;

/// A set of item identifiers (vertices, edges or knapsack items).
///
/// Ordered so that every iteration over a solution is deterministic.
pub type ItemSet = std::collections::BTreeSet<usize>;

/// Sum of `weights[i]` over `items`, accumulated in increasing id order.
pub fn weight_of(weights: &[f64], items: &ItemSet) -> f64 {
    items.iter().map(|&i| weights[i]).sum()
}
