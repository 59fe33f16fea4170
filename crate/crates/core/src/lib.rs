//! Turn a flat-color park layout plan into vector geometry, a procedural 3D scene and
//! terrain analysis overlays.
//!
//! The stages can be used one at a time:
//!
//! - [`raster`]: load, L0-smooth and sharpen a plan image.
//! - [`segment`]: split it into one binary mask per [`Category`].
//! - [`vector`]: trace, simplify and fit masks into a [`VectorScene`].
//! - [`model`]: build buildings, terrain, paving, roads and trees, export glTF/OBJ.
//! - [`analysis`]: elevation, slope and drainage overlays of the terrain.
//!
//! or all at once through [`pipeline::cmd_pipeline`].

// `!(x >= 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod category;
pub mod config;
pub mod error;
pub mod geom;
pub mod model;
pub mod pipeline;
pub mod raster;
pub mod segment;
pub mod synth;
pub mod vector;

pub use category::Category;
pub use config::PipelineConfig;
pub use error::{Error, Result};
pub use geom::Point;
pub use raster::RasterPlan;
pub use segment::{CategoryMask, Palette};
pub use vector::VectorScene;
