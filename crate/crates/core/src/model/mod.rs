//! 3D scene generation from a vector scene.
//!
//! World frame: x east, y north (image y negated), z up, meters, origin at the image's
//! top-left corner.

pub mod building;
pub mod config;
pub mod export;
pub mod mesh;
pub mod pavement;
pub mod planting;
pub mod rng;
pub mod road;
pub mod terrain;

use std::path::Path;

pub use building::build_building;
pub use config::BuildConfig;
pub use export::{to_gltf, to_obj, write_scene, SCENE_FILES};
pub use mesh::Mesh3D;
pub use pavement::{build_pavement, ear_clip};
pub use planting::{build_plantings, cluster_tree_count, scatter_interior};
pub use rng::substream;
pub use road::build_road;
pub use terrain::{build_terrain, build_terrain_with_holes, world_ring, TerrainField};

use crate::category::Category;
use crate::error::{Error, Result};
use crate::geom::{distance_to_ring, point_in_polygon, segments_intersect, signed_area, Point};
use crate::vector::VectorScene;

/// Pixel coordinates to world meters.
pub fn to_world(p: Point, scale: f64) -> Point {
    Point(p.0 * scale, -p.1 * scale)
}

/// One named mesh in the output scene.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    /// `<category>_<index>`, index counted within the category.
    pub name: String,
    pub mesh: Mesh3D,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scene3D {
    pub elements: Vec<Element>,
    /// Green and water terrain, in build order; their meshes also appear in `elements`.
    pub terrain: Vec<TerrainField>,
}

impl Scene3D {
    pub fn meshes_of(&self, category: Category) -> impl Iterator<Item = &Mesh3D> {
        self.elements.iter().filter(move |e| e.mesh.category == category).map(|e| &e.mesh)
    }

    fn push(&mut self, index: usize, mesh: Mesh3D) {
        if mesh.is_empty() {
            log::warn!("{}_{index} produced no triangles, omitted", mesh.category);
            return;
        }
        self.elements.push(Element { name: format!("{}_{index}", mesh.category), mesh });
    }
}

/// Runs every builder in [`Category::BUILD_ORDER`]. Each element draws from its own random
/// substream keyed by (seed, category, index).
pub fn build_scene(scene: &VectorScene, cfg: &BuildConfig) -> Result<Scene3D> {
    cfg.validate()?;
    let scale = scene.scale;
    let mut out = Scene3D::default();
    for category in Category::BUILD_ORDER {
        match category {
            Category::Building => {
                for (i, fp) in scene.buildings.iter().enumerate() {
                    let mut rng = substream(cfg.seed, category, i);
                    out.push(i, build_building(fp, scale, cfg, &mut rng));
                }
            }
            Category::Pavement => {
                for (i, r) in scene.regions_of(category).enumerate() {
                    out.push(i, build_pavement(r, i, scale)?);
                }
            }
            Category::GreenSpace | Category::Water => {
                for (i, r) in scene.regions_of(category).enumerate() {
                    let mut rng = substream(cfg.seed, category, i);
                    let holes = match category {
                        Category::GreenSpace => terrain_holes(scene, &world_ring(r, scale)?, cfg.grid_spacing),
                        _ => Vec::new(),
                    };
                    let field = build_terrain_with_holes(r, &holes, scale, cfg, &mut rng)?;
                    out.push(i, field.mesh.clone());
                    out.terrain.push(field);
                }
            }
            Category::Road | Category::CityRoad => {
                let lines = scene.centerlines.iter().filter(|c| c.category == category);
                for (i, cl) in lines.enumerate() {
                    out.push(i, build_road(cl, scale, cfg, &out.terrain));
                }
            }
            Category::Plant => {
                for (i, m) in build_plantings(&scene.plantings, scale, cfg).into_iter().enumerate() {
                    out.push(i, m);
                }
            }
            Category::RedLine => {}
        }
    }
    for e in &out.elements {
        e.mesh.validate().map_err(|err| Error::Invariant(format!("{}: {err}", e.name)))?;
    }
    Ok(out)
}

fn rings_cross(a: &[Point], b: &[Point]) -> bool {
    let edges = |r: &[Point]| (0..r.len()).map(|i| (r[i], r[(i + 1) % r.len()])).collect::<Vec<_>>();
    let (ea, eb) = (edges(a), edges(b));
    ea.iter().any(|&(p, q)| eb.iter().any(|&(r, s)| segments_intersect(p, q, r, s)))
        || point_in_polygon(a[0], b)
        || point_in_polygon(b[0], a)
}

/// Water, pavement and building outlines lying well inside a green ring. The mound is cut
/// open there so it does not bury them.
fn terrain_holes(scene: &VectorScene, outer: &[Point], spacing: f64) -> Vec<Vec<Point>> {
    let mut candidates: Vec<Vec<Point>> = Vec::new();
    for r in scene.regions.iter().filter(|r| matches!(r.category, Category::Water | Category::Pavement)) {
        if let Ok(ring) = world_ring(r, scene.scale) {
            candidates.push(ring);
        }
    }
    for b in &scene.buildings {
        let mut ring: Vec<Point> = b.corners.iter().map(|&p| to_world(p, scene.scale)).collect();
        if signed_area(&ring) < 0.0 {
            ring.reverse();
        }
        candidates.push(ring);
    }
    let mut holes: Vec<Vec<Point>> = Vec::new();
    for ring in candidates {
        let inside = ring.iter().all(|&p| point_in_polygon(p, outer) && distance_to_ring(p, outer) >= spacing);
        if inside && !holes.iter().any(|h| rings_cross(h, &ring)) {
            holes.push(ring);
        }
    }
    holes
}

/// Builds the scene and writes glTF and OBJ files into `dir`.
pub fn assemble_and_export(scene: &VectorScene, cfg: &BuildConfig, dir: &Path) -> Result<Scene3D> {
    let built = build_scene(scene, cfg)?;
    write_scene(&built, dir)?;
    Ok(built)
}
