//! Storage capacity and index coding rate of undirected graphs.
//!
//! Exact solvers for small graphs, LP lower and upper bounds, planar
//! approximation and decomposition schemes, gadget certificates, and bounds
//! for the partial-recovery setting. All LP values are exact rationals.

pub mod clique_packing;
pub mod entropy;
pub mod exact;
pub mod graph;
pub mod interval;
pub mod lp;
pub mod partial;
pub mod planar;
pub mod ptas;
pub mod rational;

pub use graph::{Graph, GraphError, VertexSet};
pub use rational::Rational;
