//! Executable constructions and searches around Erdős–Rogers functions of
//! k-uniform hypergraphs.

pub mod bounds;
pub mod cli;
pub mod clique;
pub mod coloring;
pub mod combinatorics;
pub mod error;
pub mod exact;
pub mod extraction;
pub mod hypergraph;
pub mod packing;
pub mod rng;
pub mod vertex_set;

pub use error::{Error, Result};
pub use hypergraph::KUniformHypergraph;
pub use vertex_set::VertexSet;
