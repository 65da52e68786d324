//! Combinatorial 4/5-approximation for the maximum traveling salesman problem.

pub mod coloring;
pub mod cycle_cover;
pub mod dsu;
pub mod gadget;
pub mod error;
pub mod exchange;
pub mod g2prime;
pub mod graph;
pub mod harness;
pub mod matching;
pub mod pipeline;
pub mod tour;

pub use error::{Error, Result};
pub use graph::{CompleteGraph, CycleCover, EdgeId, HalfEdge, Multigraph, Weight};
