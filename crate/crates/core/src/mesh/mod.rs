//! Tagged tetrahedral mesh, local operations and validators.

mod collapse;
mod complex;
mod ops;
mod smooth;
mod swap;
mod tetmesh;
pub mod topology;
pub mod validate;

pub use collapse::CollapsePlan;
pub use complex::{Complex, Edge, Face};
pub use smooth::SMOOTH_BISECTIONS;
pub use tetmesh::{Tag, TetMesh, TET_FACES};
pub use topology::{euler_characteristic, orient_closed, surface_topology};
pub use validate::{validate, ValidateOptions, ValidationReport};
