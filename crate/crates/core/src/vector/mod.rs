//! Vectorization of category masks.

pub mod bezier;
pub mod contour;
pub mod morph;
pub mod planting;
pub mod rect;
pub mod region;
pub mod scene;
pub mod simplify;
pub mod skeleton;

pub use contour::{trace_contours, Contour};
pub use planting::{extract_plantings, PlantCluster, PlantingPlan, SingleTree};
pub use rect::{fit_building, min_area_rect, BuildingFootprint, OrientedRect};
pub use region::{extract_regions, RegionOutline, RegionParams};
pub use scene::{assemble_scene, validate_scene_value, ExtractParams, VectorScene, SCENE_SCHEMA};
pub use simplify::{rdp, rdp_closed};
pub use skeleton::{extract_centerlines, zhang_suen, Centerline, CenterlineParams};
