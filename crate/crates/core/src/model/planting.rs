use std::collections::HashMap;

use rand::Rng;

use crate::category::Category;
use crate::geom::{point_in_polygon, polygon_area, Point};
use crate::model::building::draw_height;
use crate::model::config::BuildConfig;
use crate::model::mesh::Mesh3D;
use crate::model::rng::substream;
use crate::model::to_world;
use crate::vector::{PlantCluster, PlantingPlan, SingleTree};

pub const TRUNK_RADIUS: f64 = 0.15;
pub const TRUNK_HEIGHT: f64 = 2.0;
const TRUNK_SIDES: usize = 8;
/// Initial minimum distance between scattered cluster trees, meters.
pub const TREE_SPACING: f64 = 2.0;
/// Consecutive rejected candidates before the spacing is halved.
const MAX_FAILURES: usize = 100;

/// Interior tree count of a cluster: `max(1, round(area * density))`.
pub fn cluster_tree_count(area_m2: f64, density: f64) -> usize {
    ((area_m2 * density).round() as usize).max(1)
}

fn trunk(base: Point) -> Mesh3D {
    let mut m = Mesh3D::new(Category::Plant);
    for z in [0.0, TRUNK_HEIGHT] {
        for k in 0..TRUNK_SIDES {
            let t = k as f64 / TRUNK_SIDES as f64 * std::f64::consts::TAU;
            m.push_vertex([base.0 + TRUNK_RADIUS * t.cos(), base.1 + TRUNK_RADIUS * t.sin(), z]);
        }
    }
    let bottom = m.push_vertex([base.0, base.1, 0.0]);
    let top = m.push_vertex([base.0, base.1, TRUNK_HEIGHT]);
    let s = TRUNK_SIDES as u32;
    for k in 0..s {
        let j = (k + 1) % s;
        m.triangles.push([k, j, j + s]);
        m.triangles.push([k, j + s, k + s]);
        m.triangles.push([bottom, j, k]);
        m.triangles.push([top, k + s, j + s]);
    }
    m
}

/// Once-subdivided icosahedron (80 faces), outward facing.
fn icosphere(center: [f64; 3], radius: f64) -> Mesh3D {
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<[f64; 3]> = vec![
        [-1.0, g, 0.0],
        [1.0, g, 0.0],
        [-1.0, -g, 0.0],
        [1.0, -g, 0.0],
        [0.0, -1.0, g],
        [0.0, 1.0, g],
        [0.0, -1.0, -g],
        [0.0, 1.0, -g],
        [g, 0.0, -1.0],
        [g, 0.0, 1.0],
        [-g, 0.0, -1.0],
        [-g, 0.0, 1.0],
    ];
    let faces: [[u32; 3]; 20] = [
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    let mut cache: HashMap<(u32, u32), u32> = HashMap::new();
    let mut mid = |a: u32, b: u32, verts: &mut Vec<[f64; 3]>| {
        *cache.entry((a.min(b), a.max(b))).or_insert_with(|| {
            let (p, q) = (verts[a as usize], verts[b as usize]);
            verts.push([(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0, (p[2] + q[2]) / 2.0]);
            (verts.len() - 1) as u32
        })
    };
    let mut tris = Vec::with_capacity(80);
    for [a, b, c] in faces {
        let ab = mid(a, b, &mut verts);
        let bc = mid(b, c, &mut verts);
        let ca = mid(c, a, &mut verts);
        tris.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
    }
    let mut m = Mesh3D::new(Category::Plant);
    for v in verts {
        let l = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        m.push_vertex([center[0] + radius * v[0] / l, center[1] + radius * v[1] / l, center[2] + radius * v[2] / l]);
    }
    m.triangles = tris;
    m
}

/// Trunk plus spherical canopy resting on the trunk top, at a world-space position.
pub fn tree_mesh(base: Point, canopy_radius: f64) -> Mesh3D {
    let mut m = trunk(base);
    m.append(&icosphere([base.0, base.1, TRUNK_HEIGHT + canopy_radius], canopy_radius));
    m
}

pub fn build_single(tree: &SingleTree, scale: f64) -> Mesh3D {
    tree_mesh(to_world(tree.center, scale), tree.radius * scale)
}

/// `n` points inside `ring` by rejection sampling from its bounding box, keeping a minimum
/// mutual distance that starts at [`TREE_SPACING`] and halves after every run of 100 misses.
pub fn scatter_interior(ring: &[Point], n: usize, rng: &mut impl Rng) -> Vec<Point> {
    let Some((lo, hi)) = crate::geom::bounds(ring) else { return Vec::new() };
    if n == 0 || !(polygon_area(ring) > 0.0) {
        return Vec::new();
    }
    let mut spacing = TREE_SPACING;
    let mut out: Vec<Point> = Vec::with_capacity(n);
    let mut failures = 0;
    while out.len() < n {
        let p = Point(rng.random_range(lo.0..=hi.0), rng.random_range(lo.1..=hi.1));
        if point_in_polygon(p, ring) && out.iter().all(|q| q.dist(p) >= spacing) {
            out.push(p);
            failures = 0;
        } else {
            failures += 1;
            if failures >= MAX_FAILURES {
                spacing /= 2.0;
                failures = 0;
            }
        }
    }
    out
}

/// Interior scatter plus a tree at every recorded outline point.
pub fn build_cluster(cluster: &PlantCluster, scale: f64, cfg: &BuildConfig, rng: &mut impl Rng) -> Mesh3D {
    let ring: Vec<Point> = cluster.outline.iter().map(|&p| to_world(p, scale)).collect();
    let n = cluster_tree_count(polygon_area(&ring), cfg.tree_density);
    let mut sites = scatter_interior(&ring, n, rng);
    sites.extend(cluster.points.iter().map(|&p| to_world(p, scale)));
    let mut mesh = Mesh3D::new(Category::Plant);
    for site in sites {
        let canopy = draw_height(cfg.canopy_height_range, rng) / 2.0;
        mesh.append(&tree_mesh(site, canopy));
    }
    mesh
}

/// One mesh per single tree followed by one per cluster. Element indices run across both.
pub fn build_plantings(plan: &PlantingPlan, scale: f64, cfg: &BuildConfig) -> Vec<Mesh3D> {
    let mut out: Vec<Mesh3D> = plan.singles.iter().map(|t| build_single(t, scale)).collect();
    for (k, c) in plan.clusters.iter().enumerate() {
        let mut rng = substream(cfg.seed, Category::Plant, plan.singles.len() + k);
        out.push(build_cluster(c, scale, cfg, &mut rng));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_tree_mapping() {
        let m = build_single(&SingleTree { center: Point(10.0, 10.0), radius: 3.0 }, 1.0);
        m.validate().unwrap();
        let canopy = &m.vertices[2 * TRUNK_SIDES + 2..];
        let n = canopy.len() as f64;
        let c = canopy.iter().fold([0.0; 3], |a, v| [a[0] + v[0] / n, a[1] + v[1] / n, a[2] + v[2] / n]);
        assert!((c[0] - 10.0).abs() < 1e-9 && (c[1] + 10.0).abs() < 1e-9 && (c[2] - 5.0).abs() < 1e-9);
        assert!(canopy
            .iter()
            .all(|v| ((v[0] - c[0]).powi(2) + (v[1] - c[1]).powi(2) + (v[2] - c[2]).powi(2)).sqrt() - 3.0 < 1e-9));
    }

    #[test]
    fn tree_parts_are_closed() {
        assert!(trunk(Point(0.0, 0.0)).is_closed());
        let s = icosphere([0.0; 3], 1.0);
        assert!(s.is_closed());
        assert_eq!(s.triangles.len(), 80);
        assert!(s.signed_volume() > 0.0);
        assert!(trunk(Point(0.0, 0.0)).signed_volume() > 0.0);
    }

    #[test]
    fn coupling_rule() {
        assert_eq!(cluster_tree_count(500.0, 0.02), 10);
        assert_eq!(cluster_tree_count(20.0, 0.02), 1);
        assert_eq!(cluster_tree_count(0.0, 0.02), 1);
    }

    #[test]
    fn scatter_stays_inside_with_spacing() {
        let ring = vec![Point(0.0, 0.0), Point(20.0, 0.0), Point(20.0, 25.0), Point(0.0, 25.0)];
        let mut rng = substream(5, Category::Plant, 0);
        let pts = scatter_interior(&ring, 10, &mut rng);
        assert_eq!(pts.len(), 10);
        assert!(pts.iter().all(|&p| point_in_polygon(p, &ring)));
        for i in 0..pts.len() {
            for j in 0..i {
                assert!(pts[i].dist(pts[j]) >= TREE_SPACING);
            }
        }
    }

    #[test]
    fn crowded_scatter_relaxes_spacing() {
        let ring = vec![Point(0.0, 0.0), Point(3.0, 0.0), Point(3.0, 3.0), Point(0.0, 3.0)];
        let pts = scatter_interior(&ring, 30, &mut substream(5, Category::Plant, 1));
        assert_eq!(pts.len(), 30);
    }
}
