//! Topological offsets of simplicial complexes embedded in tetrahedral meshes.
//!
//! The input complex is a tagged sub-complex of a tetrahedral background
//! mesh. The pipeline makes the embedding simplicial, inserts a
//! combinatorial offset surface with binary marching-tetrahedra rules, grows
//! the enclosed volume toward a target distance and optimizes the surface
//! with local operations that never invert a tet or change topology.

// `!(x > 0.0)` is used on purpose to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod apps;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod expansion;
pub mod geom;
pub mod insertion;
pub mod io;
pub mod mesh;
pub mod optimize;
pub mod par;

pub use error::{Error, Result};
