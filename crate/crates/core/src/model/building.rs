use rand::Rng;

use crate::category::Category;
use crate::geom::signed_area;
use crate::model::config::BuildConfig;
use crate::model::mesh::Mesh3D;
use crate::model::to_world;
use crate::vector::BuildingFootprint;

pub fn draw_height(range: [f64; 2], rng: &mut impl Rng) -> f64 {
    let [lo, hi] = range;
    if hi > lo {
        rng.random_range(lo..=hi)
    } else {
        lo
    }
}

/// Extrudes a footprint into a closed prism with a height drawn from the configured range.
pub fn build_building(fp: &BuildingFootprint, scale: f64, cfg: &BuildConfig, rng: &mut impl Rng) -> Mesh3D {
    let h = draw_height(cfg.building_height_range, rng);
    let mut base: Vec<_> = fp.corners.iter().map(|&p| to_world(p, scale)).collect();
    if signed_area(&base) < 0.0 {
        base.reverse();
    }
    let mut mesh = Mesh3D::new(Category::Building);
    for p in &base {
        mesh.push_vertex([p.0, p.1, 0.0]);
    }
    for p in &base {
        mesh.push_vertex([p.0, p.1, h]);
    }
    mesh.triangles.extend([[0, 2, 1], [0, 3, 2], [4, 5, 6], [4, 6, 7]]);
    for i in 0..4u32 {
        let j = (i + 1) % 4;
        mesh.triangles.push([i, j, j + 4]);
        mesh.triangles.push([i, j + 4, i + 4]);
    }
    mesh
}
