use rand::Rng;
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};

use crate::category::Category;
use crate::error::{Error, Result};
use crate::geom::{distance_to_ring, point_in_polygon, signed_area, Point};
use crate::model::config::BuildConfig;
use crate::model::mesh::{Mesh3D, MIN_TRIANGLE_AREA};
use crate::model::pavement::{ear_clip, open_ring};
use crate::model::to_world;
use crate::vector::RegionOutline;

/// Grid points closer than this fraction of the spacing to the boundary are dropped, which
/// keeps slivers out of the triangulation.
const BOUNDARY_CLEARANCE: f64 = 0.35;

/// Elevated (green) or sunken (water) terrain over one region.
#[derive(Debug, Clone, PartialEq)]
pub struct TerrainField {
    pub mesh: Mesh3D,
    /// Indices of boundary-ring vertices; their z is exactly 0.
    pub boundary_vertices: Vec<u32>,
    /// Per-vertex distance to the region boundary, meters.
    pub vertex_distance: Vec<f64>,
    /// +1 for green space, -1 for water.
    pub sign: f64,
}

pub fn terrain_sign(category: Category) -> Option<f64> {
    match category {
        Category::GreenSpace => Some(1.0),
        Category::Water => Some(-1.0),
        _ => None,
    }
}

fn distance_to_rings(p: Point, outer: &[Point], holes: &[Vec<Point>]) -> f64 {
    holes.iter().map(|h| distance_to_ring(p, h)).fold(distance_to_ring(p, outer), f64::min)
}

fn inside_region(p: Point, outer: &[Point], holes: &[Vec<Point>]) -> bool {
    point_in_polygon(p, outer) && !holes.iter().any(|h| point_in_polygon(p, h))
}

/// Grid points at `spacing` inside `outer` and outside every hole, away from all rings.
pub fn interior_grid(outer: &[Point], holes: &[Vec<Point>], spacing: f64) -> Vec<Point> {
    let Some((lo, hi)) = crate::geom::bounds(outer) else { return Vec::new() };
    let x0 = (lo.0 / spacing).ceil() as i64;
    let x1 = (hi.0 / spacing).floor() as i64;
    let y0 = (lo.1 / spacing).ceil() as i64;
    let y1 = (hi.1 / spacing).floor() as i64;
    let mut out = Vec::new();
    for j in y0..=y1 {
        for i in x0..=x1 {
            let p = Point(i as f64 * spacing, j as f64 * spacing);
            if inside_region(p, outer, holes) && distance_to_rings(p, outer, holes) >= BOUNDARY_CLEARANCE * spacing {
                out.push(p);
            }
        }
    }
    out
}

struct Cdt {
    points: Vec<Point>,
    boundary: Vec<bool>,
    triangles: Vec<[u32; 3]>,
}

/// Constrained Delaunay triangulation of the rings plus interior points, keeping only
/// triangles inside the outer ring and outside the holes.
fn triangulate(outer: &[Point], holes: &[Vec<Point>], interior: &[Point]) -> Result<Cdt> {
    let mut cdt: ConstrainedDelaunayTriangulation<Point2<f64>> = ConstrainedDelaunayTriangulation::new();
    let insert = |cdt: &mut ConstrainedDelaunayTriangulation<Point2<f64>>, p: Point| {
        cdt.insert(Point2::new(p.0, p.1)).map_err(|e| Error::Validation(format!("terrain point {p:?}: {e:?}")))
    };
    let mut ring_handles = Vec::new();
    for ring in std::iter::once(outer).chain(holes.iter().map(|h| h.as_slice())) {
        let handles = ring.iter().map(|&p| insert(&mut cdt, p)).collect::<Result<Vec<_>>>()?;
        ring_handles.push(handles);
    }
    for &p in interior {
        insert(&mut cdt, p)?;
    }
    for handles in &ring_handles {
        let n = handles.len();
        for i in 0..n {
            let (a, b) = (handles[i], handles[(i + 1) % n]);
            if a == b {
                continue;
            }
            if cdt.can_add_constraint(a, b) {
                cdt.add_constraint(a, b);
            } else {
                log::warn!("terrain boundary edge {i} crosses another edge, left unconstrained");
            }
        }
    }
    let points: Vec<Point> = cdt.vertices().map(|v| Point(v.position().x, v.position().y)).collect();
    let mut boundary = vec![false; points.len()];
    for h in ring_handles.iter().flatten() {
        boundary[h.index()] = true;
    }
    let mut triangles = Vec::new();
    for face in cdt.inner_faces() {
        let [a, b, c] = face.vertices().map(|v| v.fix().index() as u32);
        let (pa, pb, pc) = (points[a as usize], points[b as usize], points[c as usize]);
        let centroid = Point((pa.0 + pb.0 + pc.0) / 3.0, (pa.1 + pb.1 + pc.1) / 3.0);
        if inside_region(centroid, outer, holes) {
            triangles.push([a, b, c]);
        }
    }
    Ok(Cdt { points, boundary, triangles })
}

/// Builds terrain whose height grows with distance from the shoreline:
/// `z = sign * A * (d / d_max)^e * (1 + jitter * u)`, `u` uniform in [-1, 1], boundary z = 0.
pub fn build_terrain(
    region: &RegionOutline,
    scale: f64,
    cfg: &BuildConfig,
    rng: &mut impl Rng,
) -> Result<TerrainField> {
    build_terrain_with_holes(region, &[], scale, cfg, rng)
}

/// [`build_terrain`] with openings. `holes` are world-space rings lying inside the region;
/// no triangles are generated inside them and their rings count as shoreline for `d`.
pub fn build_terrain_with_holes(
    region: &RegionOutline,
    holes: &[Vec<Point>],
    scale: f64,
    cfg: &BuildConfig,
    rng: &mut impl Rng,
) -> Result<TerrainField> {
    let sign = terrain_sign(region.category).ok_or_else(|| {
        Error::Validation(format!("terrain needs a green_space or water region, got {}", region.category))
    })?;
    let amplitude = if sign > 0.0 { cfg.terrain_amplitude } else { cfg.water_depth };
    let ring = world_ring(region, scale)?;
    let grid = interior_grid(&ring, holes, cfg.grid_spacing);
    let mut mesh = Mesh3D::new(region.category);

    if grid.is_empty() {
        // Too small for the grid: flat cap over the outline.
        for p in &ring {
            mesh.push_vertex([p.0, p.1, 0.0]);
        }
        mesh.triangles = ear_clip(&ring).into_iter().map(|t| t.map(|i| i as u32)).collect();
        mesh.drop_degenerate();
        let n = ring.len();
        return Ok(TerrainField {
            mesh,
            boundary_vertices: (0..n as u32).collect(),
            vertex_distance: vec![0.0; n],
            sign,
        });
    }

    let tri = triangulate(&ring, holes, &grid)?;
    let dist: Vec<f64> = tri
        .points
        .iter()
        .zip(&tri.boundary)
        .map(|(&p, &b)| if b { 0.0 } else { distance_to_rings(p, &ring, holes) })
        .collect();
    let d_max = dist.iter().copied().fold(0.0, f64::max);
    for (i, p) in tri.points.iter().enumerate() {
        // Draw for every vertex so the stream position does not depend on the boundary count.
        let u: f64 = rng.random_range(-1.0..=1.0);
        let z = if tri.boundary[i] || d_max <= 0.0 {
            0.0
        } else {
            sign * amplitude * (dist[i] / d_max).powf(cfg.terrain_exponent) * (1.0 + cfg.terrain_jitter * u)
        };
        mesh.push_vertex([p.0, p.1, z]);
    }
    mesh.triangles = tri.triangles;
    orient_up(&mut mesh);
    mesh.drop_degenerate();
    let boundary_vertices = (0..tri.points.len() as u32).filter(|&i| tri.boundary[i as usize]).collect();
    Ok(TerrainField { mesh, boundary_vertices, vertex_distance: dist, sign })
}

/// Counter-clockwise world-space outline of a region's smooth samples.
pub fn world_ring(region: &RegionOutline, scale: f64) -> Result<Vec<Point>> {
    let mut ring: Vec<Point> = open_ring(&region.smooth_samples).into_iter().map(|p| to_world(p, scale)).collect();
    if ring.len() < 3 {
        return Err(Error::Validation(format!("{} region has fewer than 3 distinct points", region.category)));
    }
    if signed_area(&ring) < 0.0 {
        ring.reverse();
    }
    Ok(ring)
}

/// Makes every triangle counter-clockwise seen from above.
fn orient_up(mesh: &mut Mesh3D) {
    for t in 0..mesh.triangles.len() {
        let [a, b, c] = mesh.triangle(t);
        let area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        if area2 < 0.0 {
            mesh.triangles[t].swap(1, 2);
        }
    }
}

/// Terrain height under `p` (barycentric interpolation in the xy projection), if any
/// triangle of the field covers it.
pub fn sample_height(field: &TerrainField, p: Point) -> Option<f64> {
    for t in 0..field.mesh.triangles.len() {
        let [a, b, c] = field.mesh.triangle(t);
        let det = (b[1] - c[1]) * (a[0] - c[0]) + (c[0] - b[0]) * (a[1] - c[1]);
        if det.abs() < MIN_TRIANGLE_AREA {
            continue;
        }
        let l1 = ((b[1] - c[1]) * (p.0 - c[0]) + (c[0] - b[0]) * (p.1 - c[1])) / det;
        let l2 = ((c[1] - a[1]) * (p.0 - c[0]) + (a[0] - c[0]) * (p.1 - c[1])) / det;
        let l3 = 1.0 - l1 - l2;
        let tol = -1e-9;
        if l1 >= tol && l2 >= tol && l3 >= tol {
            return Some(l1 * a[2] + l2 * b[2] + l3 * c[2]);
        }
    }
    None
}
