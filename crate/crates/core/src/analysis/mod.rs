//! Elevation, slope and drainage analysis over terrain meshes.

pub mod render;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::geom::Point;
use crate::model::mesh::{dot, Mesh3D};
use crate::model::TerrainField;

pub use render::{render_overlay, OverlayLegend};

/// Slope class boundaries in degrees; the last class catches everything up to vertical.
pub const SLOPE_EDGES: [f64; 6] = [0.0, 5.0, 19.0, 45.0, 65.0, 90.0];
/// Degrees of slack when comparing a slope with a class boundary.
const SLOPE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverlayKind {
    Elevation,
    Slope,
    Drainage,
}

impl OverlayKind {
    pub const ALL: [OverlayKind; 3] = [OverlayKind::Elevation, OverlayKind::Slope, OverlayKind::Drainage];

    pub fn as_str(self) -> &'static str {
        match self {
            OverlayKind::Elevation => "elevation",
            OverlayKind::Slope => "slope",
            OverlayKind::Drainage => "drainage",
        }
    }

    /// Base name of the rendered files, `analysis_<kind>`.
    pub fn file_stem(self) -> String {
        format!("analysis_{}", self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegendEntry {
    pub label: String,
    pub color: [u8; 3],
}

/// Per-face analysis result. All per-face vectors have one entry per analyzed triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisOverlay {
    pub kind: OverlayKind,
    /// Triangle geometry, world meters.
    pub faces: Vec<[[f64; 3]; 3]>,
    /// Mean z, slope in degrees, or flow accumulation.
    pub values: Vec<f64>,
    /// Legend class of each face.
    pub bins: Vec<usize>,
    pub colors: Vec<[u8; 3]>,
    pub legend: Vec<LegendEntry>,
    /// Drainage only: unit downhill direction in the xy plane, zero on flat faces.
    pub flow: Vec<[f64; 2]>,
    /// Drainage only: unit downhill direction within the face plane.
    pub flow3d: Vec<[f64; 3]>,
    /// Drainage only: face receiving this face's flow, `None` at local minima.
    pub receiver: Vec<Option<usize>>,
    /// World-space xy extent `(min, max)` used when rendering.
    pub bounds: (Point, Point),
}

impl AnalysisOverlay {
    fn new(kind: OverlayKind, meshes: &[&Mesh3D]) -> Self {
        let faces: Vec<[[f64; 3]; 3]> =
            meshes.iter().flat_map(|m| (0..m.triangles.len()).map(move |t| m.triangle(t))).collect();
        let mut lo = Point(f64::INFINITY, f64::INFINITY);
        let mut hi = Point(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in faces.iter().flatten() {
            lo = Point(lo.0.min(v[0]), lo.1.min(v[1]));
            hi = Point(hi.0.max(v[0]), hi.1.max(v[1]));
        }
        let bounds = if faces.is_empty() { (Point(0.0, 0.0), Point(0.0, 0.0)) } else { (lo, hi) };
        AnalysisOverlay {
            kind,
            faces,
            values: Vec::new(),
            bins: Vec::new(),
            colors: Vec::new(),
            legend: Vec::new(),
            flow: Vec::new(),
            flow3d: Vec::new(),
            receiver: Vec::new(),
            bounds,
        }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Replaces the render extent, e.g. with the full plan area.
    pub fn with_bounds(mut self, min: Point, max: Point) -> Self {
        self.bounds = (min, max);
        self
    }

    pub fn bin_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.legend.len()];
        for &b in &self.bins {
            counts[b] += 1;
        }
        counts
    }

    pub fn value_range(&self) -> Option<(f64, f64)> {
        let first = *self.values.first()?;
        Some(self.values.iter().fold((first, first), |(lo, hi), &v| (lo.min(v), hi.max(v))))
    }
}

fn lerp_color(a: [u8; 3], b: [u8; 3], t: f64) -> [u8; 3] {
    let t = t.clamp(0.0, 1.0);
    [0, 1, 2].map(|k| (a[k] as f64 + (b[k] as f64 - a[k] as f64) * t).round() as u8)
}

const LOW: [u8; 3] = [0, 0, 255];
const HIGH: [u8; 3] = [255, 0, 0];

/// Mean vertex height per face on a blue (lowest) to red (highest) ramp. A flat input maps
/// every face to the middle of the ramp.
pub fn elevation_overlay(fields: &[TerrainField]) -> AnalysisOverlay {
    let meshes: Vec<&Mesh3D> = fields.iter().map(|f| &f.mesh).collect();
    let mut o = AnalysisOverlay::new(OverlayKind::Elevation, &meshes);
    o.values = o.faces.iter().map(|f| (f[0][2] + f[1][2] + f[2][2]) / 3.0).collect();
    let (lo, hi) = o.value_range().unwrap_or((0.0, 0.0));
    let span = hi - lo;
    let t_of = |v: f64| if span > 0.0 { (v - lo) / span } else { 0.5 };
    o.colors = o.values.iter().map(|&v| lerp_color(LOW, HIGH, t_of(v))).collect();
    o.bins = o.values.iter().map(|&v| ((t_of(v) * 3.0).floor() as usize).min(2)).collect();
    let mid = (lo + hi) / 2.0;
    o.legend = vec![
        LegendEntry { label: format!("min {lo:.2} m"), color: LOW },
        LegendEntry { label: format!("mid {mid:.2} m"), color: lerp_color(LOW, HIGH, 0.5) },
        LegendEntry { label: format!("max {hi:.2} m"), color: HIGH },
    ];
    o
}

/// Inclination of a face from horizontal, in degrees, for an unnormalized normal.
pub fn slope_degrees(normal: [f64; 3]) -> f64 {
    normal[0].hypot(normal[1]).atan2(normal[2].abs()).to_degrees()
}

/// Class of a slope angle; boundaries are lower-inclusive.
pub fn slope_bin(deg: f64) -> usize {
    (1..SLOPE_EDGES.len() - 1).filter(|&k| deg >= SLOPE_EDGES[k] - SLOPE_TOL).count()
}

const SLOPE_COLORS: [[u8; 3]; 5] = [[26, 150, 65], [166, 217, 106], [255, 255, 191], [253, 174, 97], [215, 25, 28]];

pub fn slope_overlay(meshes: &[&Mesh3D]) -> AnalysisOverlay {
    let mut o = AnalysisOverlay::new(OverlayKind::Slope, meshes);
    o.values =
        meshes.iter().flat_map(|m| (0..m.triangles.len()).map(move |t| slope_degrees(m.face_cross(t)))).collect();
    o.bins = o.values.iter().map(|&d| slope_bin(d)).collect();
    o.colors = o.bins.iter().map(|&b| SLOPE_COLORS[b]).collect();
    o.legend = (0..5)
        .map(|k| {
            let close = if k == 4 { "]" } else { ")" };
            LegendEntry {
                label: format!("[{}, {}{close} deg", SLOPE_EDGES[k], SLOPE_EDGES[k + 1]),
                color: SLOPE_COLORS[k],
            }
        })
        .collect();
    o
}

/// Gravity projected onto a face plane: unit 3D direction and its normalized xy part.
/// Both are zero for horizontal faces.
pub fn face_flow(normal: [f64; 3]) -> ([f64; 3], [f64; 2]) {
    let l = dot(normal, normal).sqrt();
    let n = normal.map(|c| c / l);
    let g = [0.0, 0.0, -1.0];
    let gn = dot(g, n);
    let p = [g[0] - gn * n[0], g[1] - gn * n[1], g[2] - gn * n[2]];
    let pl = dot(p, p).sqrt();
    let h = p[0].hypot(p[1]);
    if pl < 1e-12 || h < 1e-12 {
        return ([0.0; 3], [0.0; 2]);
    }
    (p.map(|c| c / pl), [p[0] / h, p[1] / h])
}

/// Edge-adjacent faces within one mesh.
fn face_neighbors(mesh: &Mesh3D) -> Vec<Vec<usize>> {
    let mut by_edge: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for (f, t) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            by_edge.entry((a.min(b), a.max(b))).or_default().push(f);
        }
    }
    let mut out = vec![Vec::new(); mesh.triangles.len()];
    for faces in by_edge.values() {
        for &f in faces {
            out[f].extend(faces.iter().copied().filter(|&g| g != f));
        }
    }
    for n in &mut out {
        n.sort_unstable();
        n.dedup();
    }
    out
}

/// Steepest-descent routing: each face hands its accumulated weight (starting at 1) to the
/// edge neighbor with the lowest centroid, if that centroid lies below its own. Returns
/// (receiver, accumulation).
pub fn route_flow(centroid_z: &[f64], neighbors: &[Vec<usize>]) -> (Vec<Option<usize>>, Vec<f64>) {
    let n = centroid_z.len();
    let receiver: Vec<Option<usize>> = (0..n)
        .map(|f| {
            neighbors[f]
                .iter()
                .copied()
                .filter(|&g| centroid_z[g] < centroid_z[f])
                .min_by(|&a, &b| centroid_z[a].total_cmp(&centroid_z[b]).then(a.cmp(&b)))
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| centroid_z[b].total_cmp(&centroid_z[a]).then(a.cmp(&b)));
    let mut acc = vec![1.0; n];
    for f in order {
        if let Some(r) = receiver[f] {
            acc[r] += acc[f];
        }
    }
    (receiver, acc)
}

const DRAIN_COLORS: [[u8; 3]; 4] = [[222, 235, 247], [158, 202, 225], [66, 146, 198], [8, 69, 148]];

/// Flow direction and accumulation per face. Faces of different fields never exchange flow.
pub fn drainage_overlay(fields: &[TerrainField]) -> AnalysisOverlay {
    let meshes: Vec<&Mesh3D> = fields.iter().map(|f| &f.mesh).collect();
    let mut o = AnalysisOverlay::new(OverlayKind::Drainage, &meshes);
    let mut offset = 0;
    for m in &meshes {
        let cz: Vec<f64> = (0..m.triangles.len()).map(|t| m.centroid(t)[2]).collect();
        let (recv, acc) = route_flow(&cz, &face_neighbors(m));
        o.receiver.extend(recv.into_iter().map(|r| r.map(|g| g + offset)));
        o.values.extend(acc);
        for t in 0..m.triangles.len() {
            let (f3, f2) = face_flow(m.face_cross(t));
            o.flow3d.push(f3);
            o.flow.push(f2);
        }
        offset += m.triangles.len();
    }
    o.bins = o.values.iter().map(|&a| (a.log10().floor().max(0.0) as usize).min(3)).collect();
    o.colors = o.bins.iter().map(|&b| DRAIN_COLORS[b]).collect();
    let labels = ["1-9 faces", "10-99 faces", "100-999 faces", ">= 1000 faces"];
    o.legend = labels.iter().zip(DRAIN_COLORS).map(|(l, c)| LegendEntry { label: l.to_string(), color: c }).collect();
    o
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Category;

    fn plane_mesh(f: impl Fn(f64, f64) -> f64, n: usize) -> Mesh3D {
        let mut m = Mesh3D::new(Category::GreenSpace);
        for j in 0..=n {
            for i in 0..=n {
                let (x, y) = (i as f64, j as f64);
                m.push_vertex([x, y, f(x, y)]);
            }
        }
        let w = (n + 1) as u32;
        for j in 0..n as u32 {
            for i in 0..n as u32 {
                let a = j * w + i;
                m.triangles.push([a, a + 1, a + w + 1]);
                m.triangles.push([a, a + w + 1, a + w]);
            }
        }
        m
    }

    fn field(mesh: Mesh3D) -> TerrainField {
        let n = mesh.vertices.len();
        TerrainField { mesh, boundary_vertices: Vec::new(), vertex_distance: vec![0.0; n], sign: 1.0 }
    }

    #[test]
    fn slope_boundaries_lower_inclusive() {
        assert_eq!(slope_bin(0.0), 0);
        assert_eq!(slope_bin(4.999), 0);
        assert_eq!(slope_bin(5.0), 1);
        assert_eq!(slope_bin(19.0), 2);
        assert_eq!(slope_bin(64.9), 3);
        assert_eq!(slope_bin(65.0), 4);
        assert_eq!(slope_bin(90.0), 4);
    }

    #[test]
    fn five_degree_face_lands_in_second_bin() {
        let t = 5f64.to_radians().tan();
        let m = plane_mesh(|x, _| x * t, 1);
        let o = slope_overlay(&[&m]);
        assert!(o.bins.iter().all(|&b| b == 1), "{:?}", o.values);
        let flat = plane_mesh(|_, _| 0.0, 2);
        let o = slope_overlay(&[&flat]);
        assert!(o.values.iter().all(|&v| v == 0.0));
        assert_eq!(o.bin_counts(), vec![8, 0, 0, 0, 0]);
    }

    #[test]
    fn ramp_flows_downhill_uniformly() {
        let m = plane_mesh(|x, _| 0.3 * x, 6);
        let o = drainage_overlay(&[field(m)]);
        for f in &o.flow {
            assert!((f[0] + 1.0).abs() < 1e-6 && f[1].abs() < 1e-6, "{f:?}");
        }
    }

    #[test]
    fn flat_terrain_has_no_flow() {
        let o = drainage_overlay(&[field(plane_mesh(|_, _| 0.0, 3))]);
        assert!(o.flow.iter().all(|f| *f == [0.0, 0.0]));
        assert!(o.values.iter().all(|&a| a == 1.0));
        let e = elevation_overlay(&[field(plane_mesh(|_, _| 0.0, 3))]);
        assert!(e.values.iter().all(|&v| v == 0.0));
        assert!(e.colors.iter().all(|&c| c == lerp_color(LOW, HIGH, 0.5)));
    }

    #[test]
    fn flow_is_tangent_and_downhill() {
        let m = plane_mesh(|x, y| (x * 0.7).sin() + 0.2 * y * y, 5);
        let o = drainage_overlay(&[field(m.clone())]);
        for (t, f) in o.flow3d.iter().enumerate() {
            let n = m.face_normal(t);
            assert!(dot(*f, n).abs() <= 1e-9);
            assert!(f[2] <= 1e-12);
        }
    }

    #[test]
    fn bowl_collects_at_lowest_face() {
        let m = plane_mesh(|x, y| (x - 3.2).powi(2) + (y - 2.9).powi(2), 6);
        let o = drainage_overlay(&[field(m.clone())]);
        let sinks: f64 = (0..o.len()).filter(|&f| o.receiver[f].is_none()).map(|f| o.values[f]).sum();
        assert_eq!(sinks, o.len() as f64);
        let lowest = (0..m.triangles.len()).min_by(|&a, &b| m.centroid(a)[2].total_cmp(&m.centroid(b)[2])).unwrap();
        let most = (0..o.len()).max_by(|&a, &b| o.values[a].total_cmp(&o.values[b])).unwrap();
        assert_eq!(lowest, most);
    }

    #[test]
    fn elevation_extremes() {
        let m = plane_mesh(|x, y| 5.0 - (x - 2.0).abs() - (y - 2.0).abs(), 4);
        let o = elevation_overlay(&[field(m)]);
        let (lo, hi) = o.value_range().unwrap();
        let top = o.values.iter().position(|&v| v == hi).unwrap();
        assert!(o.faces[top].iter().any(|v| v[0] == 2.0 && v[1] == 2.0));
        assert_eq!(o.colors[top], HIGH);
        assert!(lo < hi);
        assert_eq!(o.bin_counts().iter().sum::<usize>(), o.len());
    }
}
