//! Combinatorial line complexes: when does a planar bipartite graph sketch a
//! meromorphic function?
//!
//! The crate decides whether a pre-Speiser graph (a connected planar
//! bipartite multigraph with valences between 2 and q) extends to a
//! q-regular line complex by adding parallel copies of its edges, constructs
//! the witnessing extension and a consistent q-labelling, moves between the
//! graph and its dual tessellation, and decomposes finite-type graphs into a
//! nucleus plus logarithmic ends with the branch-point divisor and
//! structural classification that follow.

pub mod balance;
pub mod corpus;
pub mod decomposition;
pub mod duality;
pub mod extension;
pub mod graph;
pub mod labelling;
pub mod map;
pub mod render;

pub use graph::{build_graph, from_json, to_json, GraphError, RotationGraph, VertexKind};
pub use labelling::{construct_labelling, q_bounds, verify_labelling, Labelling, QBounds};
pub use map::{CombMap, DartId, VertexId};
