use crate::category::Category;
use crate::error::{Error, Result};
use crate::geom::{dedup_ring, find_self_intersection, orient, signed_area, Point};
use crate::model::mesh::Mesh3D;
use crate::model::to_world;
use crate::vector::RegionOutline;

pub const PAVEMENT_Z: f64 = 0.02;

const COLLINEAR_EPS: f64 = 1e-12;

/// Ear-clipping triangulation of a simple polygon. Returns index triples into `ring`,
/// counter-clockwise (positive area) whatever the input orientation.
pub fn ear_clip(ring: &[Point]) -> Vec<[usize; 3]> {
    let mut idx: Vec<usize> = (0..ring.len()).collect();
    if signed_area(ring) < 0.0 {
        idx.reverse();
    }
    let mut tris = Vec::new();
    let mut guard = 0;
    while idx.len() > 3 && guard < 2 * ring.len() * ring.len() {
        guard += 1;
        let n = idx.len();
        let mut clipped = false;
        for k in 0..n {
            let (a, b, c) = (idx[(k + n - 1) % n], idx[k], idx[(k + 1) % n]);
            let turn = orient(ring[a], ring[b], ring[c]);
            if turn.abs() <= COLLINEAR_EPS {
                // Straight-through (or spike) vertex: removing it leaves the area unchanged.
                idx.remove(k);
                clipped = true;
                break;
            }
            if turn < 0.0 {
                continue;
            }
            let blocked = idx
                .iter()
                .any(|&p| p != a && p != b && p != c && point_in_triangle(ring[p], ring[a], ring[b], ring[c]));
            if !blocked {
                tris.push([a, b, c]);
                idx.remove(k);
                clipped = true;
                break;
            }
        }
        if !clipped {
            break;
        }
    }
    if idx.len() == 3 && orient(ring[idx[0]], ring[idx[1]], ring[idx[2]]) > COLLINEAR_EPS {
        tris.push([idx[0], idx[1], idx[2]]);
    }
    tris
}

fn point_in_triangle(p: Point, a: Point, b: Point, c: Point) -> bool {
    orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0
}

/// Removes the closing repeat and consecutive coincident samples.
pub(crate) fn open_ring(samples: &[Point]) -> Vec<Point> {
    dedup_ring(samples, 1e-9)
}

/// Flat paving slab at a fixed small height over the region's smooth outline.
pub fn build_pavement(region: &RegionOutline, index: usize, scale: f64) -> Result<Mesh3D> {
    let ring: Vec<Point> = open_ring(&region.smooth_samples).into_iter().map(|p| to_world(p, scale)).collect();
    if ring.len() < 3 {
        return Err(Error::Validation(format!("pavement region {index} has fewer than 3 distinct points")));
    }
    if let Some((i, j)) = find_self_intersection(&ring) {
        return Err(Error::Validation(format!("pavement region {index} self-intersects (edges {i} and {j})")));
    }
    let mut mesh = Mesh3D::new(Category::Pavement);
    for p in &ring {
        mesh.push_vertex([p.0, p.1, PAVEMENT_Z]);
    }
    mesh.triangles = ear_clip(&ring).into_iter().map(|t| t.map(|i| i as u32)).collect();
    mesh.drop_degenerate();
    Ok(mesh)
}
