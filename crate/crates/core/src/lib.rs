//! Adaptive compressive sensing for localizing a cluster of activated
//! vertices in a graph.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: graphs, spanning trees, cut sizes and cluster samplers.
//! - [`dendrogram`]: hierarchical partitions of a graph into connected blocks.
//! - [`numerics`]: Gaussian tails, quantiles and seeded random streams.
//! - [`sensing`]: the noisy linear measurement model with a hard energy budget.
//! - [`recovery`]: top-down exact recovery and the two-phase approximate
//!   recovery (adaptive pruning followed by passive subspace sensing).
//! - [`harness`]: Monte Carlo sweeps, CSV output and experiment configs.
//!
//! With the default `parallel` feature trials are distributed over a rayon
//! pool; without it every sweep runs on the calling thread. Both paths emit
//! identical records.

pub mod dendrogram;
pub mod error;
pub mod graph;
pub mod harness;
pub mod numerics;
pub mod recovery;
pub mod sensing;

pub use dendrogram::{BlockStats, Dendrogram};
pub use error::{Error, Result};
pub use graph::{Graph, SpanningTree, VertexSet};
pub use sensing::{SensingSession, Sensor};
