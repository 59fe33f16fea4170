use crate::category::Category;
use crate::geom::{dedup_ring, Point};
use crate::model::config::BuildConfig;
use crate::model::mesh::Mesh3D;
use crate::model::terrain::{sample_height, TerrainField};
use crate::model::to_world;
use crate::vector::Centerline;

pub const ROAD_Z: f64 = 0.01;
/// Miter length (relative to half the width) beyond which a joint is beveled.
pub const MITER_LIMIT: f64 = 4.0;

pub fn road_width(category: Category, cfg: &BuildConfig) -> f64 {
    if category == Category::CityRoad {
        cfg.city_road_width
    } else {
        cfg.road_width
    }
}

/// Left/right offset vertices along a polyline. A beveled joint emits two cross-sections
/// at the same center point, one per adjoining segment.
fn offset_sections(path: &[Point], half: f64) -> Vec<(Point, Point, Point)> {
    let n = path.len();
    let dir = |i: usize| (path[i + 1] - path[i]).normalized().unwrap();
    let mut out = Vec::with_capacity(n + 2);
    for (i, &p) in path.iter().enumerate() {
        if i == 0 || i == n - 1 {
            let d = if i == 0 { dir(0) } else { dir(n - 2) };
            let nl = d.perp();
            out.push((p, p + nl * half, p - nl * half));
            continue;
        }
        let (n0, n1) = (dir(i - 1).perp(), dir(i).perp());
        let bisector = (n0 + n1).normalized();
        match bisector {
            Some(m) if 1.0 / m.dot(n0) <= MITER_LIMIT => {
                let len = half / m.dot(n0);
                out.push((p, p + m * len, p - m * len));
            }
            _ => {
                out.push((p, p + n0 * half, p - n0 * half));
                out.push((p, p + n1 * half, p - n1 * half));
            }
        }
    }
    out
}

/// Constant-width ribbon along each centerline path. Paths with fewer than two distinct
/// points are skipped.
pub fn build_road(cl: &Centerline, scale: f64, cfg: &BuildConfig, terrain: &[TerrainField]) -> Mesh3D {
    let half = road_width(cl.category, cfg) / 2.0;
    let mut mesh = Mesh3D::new(cl.category);
    for (k, raw) in cl.paths.iter().enumerate() {
        let mut path: Vec<Point> = raw.iter().map(|&p| to_world(p, scale)).collect();
        let closed = path.len() > 2 && path.first() == path.last();
        path = dedup_ring(&path, 1e-9);
        if closed {
            path.push(path[0]);
        }
        if path.len() < 2 {
            log::warn!("skipping {} path {k}: fewer than 2 distinct points", cl.category);
            continue;
        }
        let z_at = |q: Point| {
            let ground = if cfg.drape { terrain.iter().find_map(|f| sample_height(f, q)).unwrap_or(0.0) } else { 0.0 };
            ground + ROAD_Z
        };
        let sections = offset_sections(&path, half);
        let mut prev: Option<(u32, u32, Point)> = None;
        for (center, l, r) in sections {
            let li = mesh.push_vertex([l.0, l.1, z_at(l)]);
            let ri = mesh.push_vertex([r.0, r.1, z_at(r)]);
            if let Some((pl, pr, pc)) = prev {
                if pc == center {
                    // Bevel: fill the wedge on the outer side with a fan around the center.
                    let ci = mesh.push_vertex([center.0, center.1, z_at(center)]);
                    mesh.triangles.push([ci, pl, li]);
                    mesh.triangles.push([ci, ri, pr]);
                } else {
                    mesh.triangles.push([pr, ri, li]);
                    mesh.triangles.push([pr, li, pl]);
                }
            }
            prev = Some((li, ri, center));
        }
    }
    // Bevel wedges wind by turn direction; make every triangle face up.
    for t in 0..mesh.triangles.len() {
        let [a, b, c] = mesh.triangle(t);
        if (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) < 0.0 {
            mesh.triangles[t].swap(1, 2);
        }
    }
    mesh.drop_degenerate();
    mesh
}
