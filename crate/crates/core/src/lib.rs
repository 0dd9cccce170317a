//! Combinatorial topology on finite simple graphs.
//!
//! The toolkit works entirely inside graph theory: spheres, balls and
//! manifolds are defined recursively through unit spheres and
//! contractibility, functions on vertices are analyzed through their
//! stable/unstable spheres and center manifolds, and two-critical-point
//! functions certify spheres constructively. All arithmetic is exact.

pub mod canonical;
pub mod coloring;
pub mod complex;
pub mod error;
pub mod fixtures;
pub mod graph;
mod homology;
pub mod morse;
pub mod recognition;
pub mod reeb;

pub use coloring::{Coloring, Rational};
pub use error::{Error, Result};
pub use graph::{Graph, VertexId};
pub use recognition::{Answer, Recognizer, TopologyVerdict};
