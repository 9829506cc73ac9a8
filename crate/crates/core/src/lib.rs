//! Vertex-minor calculus on small ordered graphs.
//!
//! Graphs are simple, undirected and carry the fixed vertex order `0..n`.
//! Every constructive routine emits an [`OperationTrace`] that replays the
//! construction on its input, so results can be re-checked independently.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod circle;
pub mod constellation;
mod error;
pub mod gen;
pub mod graph;
pub mod iso;
pub mod matroid;
pub mod rank;
pub mod search;
pub mod trace;

pub use error::{Error, Result};
pub use graph::OrderedGraph;
pub use trace::{OperationTrace, Step};
