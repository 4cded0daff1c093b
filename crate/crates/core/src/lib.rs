//! Exact search tools for minimal (3,3)-Ramsey graphs.
//!
//! A graph *arrows* (3,3) when every red/blue colouring of its edges contains
//! a monochromatic triangle. This crate decides arrowing, enumerates the
//! minimal arrowing graphs by isomorph-free generation followed by filtering,
//! and by extending small host graphs with independent vertices attached to
//! marked vertex sets.

pub mod arrowing;
pub mod bits;
pub mod canonical;
pub mod extension;
pub mod generator;
pub mod graph;
pub mod graph6;
pub mod invariants;
pub mod pipeline;
pub mod twosat;

pub use bits::VertexSet;
pub use graph::{Edge, EdgeList, Graph, GraphError};
