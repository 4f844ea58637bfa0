//! File formats, fixtures and reporting.

pub mod config;
pub mod field;
pub mod report;
pub mod surface;
pub mod synth;
pub mod ttm;
pub mod voxel;

pub use config::RunConfig;
pub use surface::Surface;
pub use synth::{grid, synth_grid_embedding, Shape};
