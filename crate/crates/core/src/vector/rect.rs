//! Convex hull, minimum-area enclosing rectangle and building footprint fitting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{orient, signed_area, Point};
use crate::vector::contour::Contour;

/// Angular tolerance under which a fitted rectangle counts as axis-aligned.
pub const AXIS_ALIGNED_TOLERANCE_DEG: f64 = 1.0;

/// Half a pixel: contour points are pixel centers, footprints cover whole pixels.
const PIXEL_HALF: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildingFootprint {
    pub corners: [Point; 4],
    pub rotated: bool,
}

/// Rectangle as origin corner plus two perpendicular edge vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedRect {
    pub origin: Point,
    pub u: Point,
    pub v: Point,
}

impl OrientedRect {
    pub fn area(&self) -> f64 {
        self.u.norm() * self.v.norm()
    }

    pub fn corners(&self) -> [Point; 4] {
        let o = self.origin;
        [o, o + self.u, o + self.u + self.v, o + self.v]
    }

    /// Edge direction angle folded into `[0, 90)` degrees.
    pub fn angle_deg(&self) -> f64 {
        self.u.1.atan2(self.u.0).to_degrees().rem_euclid(90.0)
    }

    /// Grows the rectangle by `d` on every side.
    pub fn outset(&self, d: f64) -> OrientedRect {
        let (Some(du), Some(dv)) = (self.u.normalized(), self.v.normalized()) else {
            return *self;
        };
        OrientedRect { origin: self.origin - du * d - dv * d, u: self.u + du * (2.0 * d), v: self.v + dv * (2.0 * d) }
    }
}

/// Andrew's monotone chain. Returns the hull counter-clockwise (positive shoelace area),
/// without collinear points.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Minimum-area enclosing rectangle by rotating calipers over the convex hull.
/// Returns `None` when the points are collinear or fewer than three distinct points exist.
pub fn min_area_rect(points: &[Point]) -> Option<OrientedRect> {
    let hull = convex_hull(points);
    let n = hull.len();
    if n < 3 || signed_area(&hull).abs() < 1e-12 {
        return None;
    }
    let at = |i: usize| hull[i % n];
    let mut best: Option<(f64, OrientedRect)> = None;
    // Calipers: j = farthest along the edge, k = farthest from it, m = farthest backwards.
    let (mut j, mut k, mut m) = (1usize, 1usize, 1usize);
    for i in 0..n {
        let base = at(i);
        let Some(u) = (at(i + 1) - base).normalized() else { continue };
        let v = u.perp();
        j = j.max(i + 1);
        while (at(j + 1) - base).dot(u) > (at(j) - base).dot(u) + 1e-12 {
            j += 1;
        }
        k = k.max(j);
        while (at(k + 1) - base).dot(v) > (at(k) - base).dot(v) + 1e-12 {
            k += 1;
        }
        m = m.max(k);
        while (at(m + 1) - base).dot(u) < (at(m) - base).dot(u) - 1e-12 {
            m += 1;
        }
        let fwd = (at(j) - base).dot(u);
        let back = (at(m) - base).dot(u);
        let height = (at(k) - base).dot(v);
        let area = (fwd - back) * height;
        if best.as_ref().is_none_or(|(a, _)| area < *a - 1e-9) {
            let rect = OrientedRect { origin: base + u * back, u: u * (fwd - back), v: v * height };
            best = Some((area, rect));
        }
    }
    best.map(|(_, r)| r)
}

/// Fits a rectangular footprint to a building contour.
///
/// Near-axis-aligned contours (within one degree) get their axis-aligned bounding box,
/// others the minimum-area rectangle. Both are grown by half a pixel so the footprint
/// covers whole pixels rather than pixel centers.
pub fn fit_building(contour: &Contour) -> Result<BuildingFootprint> {
    let rect = min_area_rect(&contour.points)
        .ok_or_else(|| Error::Validation("degenerate building contour: points are collinear".into()))?;
    let angle = rect.angle_deg();
    let off_axis = angle.min(90.0 - angle);
    let (corners, rotated) = if off_axis <= AXIS_ALIGNED_TOLERANCE_DEG {
        let (lo, hi) = crate::geom::bounds(&contour.points).unwrap();
        let (lo, hi) = (lo - Point(PIXEL_HALF, PIXEL_HALF), hi + Point(PIXEL_HALF, PIXEL_HALF));
        ([lo, Point(hi.0, lo.1), hi, Point(lo.0, hi.1)], false)
    } else {
        (rect.outset(PIXEL_HALF).corners(), true)
    };
    let mut corners = corners;
    // Match contour orientation: counter-clockwise on screen.
    if signed_area(&corners) > 0.0 {
        corners.reverse();
    }
    Ok(BuildingFootprint { corners, rotated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Category;
    use crate::segment::CategoryMask;
    use crate::vector::contour::trace_contours;

    /// Brute force: project every point on every hull-edge orientation.
    fn brute_min_rect_area(points: &[Point]) -> f64 {
        let hull = convex_hull(points);
        let mut best = f64::INFINITY;
        for i in 0..hull.len() {
            let u = (hull[(i + 1) % hull.len()] - hull[i]).normalized().unwrap();
            let v = u.perp();
            let pu: Vec<f64> = points.iter().map(|p| p.dot(u)).collect();
            let pv: Vec<f64> = points.iter().map(|p| p.dot(v)).collect();
            let span = |xs: &[f64]| {
                xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - xs.iter().cloned().fold(f64::INFINITY, f64::min)
            };
            best = best.min(span(&pu) * span(&pv));
        }
        best
    }

    fn rasterize_rect(w: u32, h: u32, center: Point, size: (f64, f64), angle_deg: f64) -> CategoryMask {
        let (s, c) = angle_deg.to_radians().sin_cos();
        CategoryMask::from_fn(Category::Building, w, h, |x, y| {
            let d = Point(x as f64 + 0.5, y as f64 + 0.5) - center;
            let lu = d.0 * c + d.1 * s;
            let lv = -d.0 * s + d.1 * c;
            lu.abs() <= size.0 / 2.0 && lv.abs() <= size.1 / 2.0
        })
    }

    #[test]
    fn hull_of_square_with_interior_points() {
        let mut pts = vec![Point(0.0, 0.0), Point(4.0, 0.0), Point(4.0, 4.0), Point(0.0, 4.0)];
        pts.extend([Point(1.0, 1.0), Point(2.0, 0.0), Point(2.0, 3.0)]);
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!(signed_area(&hull) > 0.0);
    }

    #[test]
    fn axis_aligned_rectangle_is_its_own_bbox() {
        let m = rasterize_rect(30, 20, Point(15.0, 10.0), (10.0, 6.0), 0.0);
        let c = &trace_contours(&m)[0];
        let fp = fit_building(c).unwrap();
        assert!(!fp.rotated);
        let xs: Vec<f64> = fp.corners.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = fp.corners.iter().map(|p| p.1).collect();
        assert_eq!(xs.iter().cloned().fold(f64::INFINITY, f64::min), 10.0);
        assert_eq!(xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max), 20.0);
        assert_eq!(ys.iter().cloned().fold(f64::INFINITY, f64::min), 7.0);
        assert_eq!(ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max), 13.0);
    }

    #[test]
    fn rotated_rectangle_corners_match_analytic() {
        let center = Point(20.0, 20.0);
        let m = rasterize_rect(40, 40, center, (10.0, 6.0), 45.0);
        let c = &trace_contours(&m)[0];
        let fp = fit_building(c).unwrap();
        assert!(fp.rotated);
        let (s, co) = 45f64.to_radians().sin_cos();
        let truth: Vec<Point> = [(-5.0, -3.0), (5.0, -3.0), (5.0, 3.0), (-5.0, 3.0)]
            .iter()
            .map(|&(a, b)| center + Point(a * co - b * s, a * s + b * co))
            .collect();
        for t in &truth {
            let d = fp.corners.iter().map(|p| p.dist(*t)).fold(f64::INFINITY, f64::min);
            assert!(d <= 1.0, "corner {t:?} off by {d}");
        }
    }

    #[test]
    fn l_shape_rectangle_covers_contour() {
        let m = CategoryMask::from_fn(Category::Building, 30, 30, |x, y| {
            (5..25).contains(&x) && (5..10).contains(&y) || (5..10).contains(&x) && (5..25).contains(&y)
        });
        let c = &trace_contours(&m)[0];
        let rect = min_area_rect(&c.points).unwrap();
        assert!((rect.area() - brute_min_rect_area(&c.points)).abs() < 1e-6);
        let fp = fit_building(c).unwrap();
        let area = signed_area(&fp.corners).abs();
        assert!(area >= c.pixel_area as f64, "{area} < {}", c.pixel_area);
    }

    #[test]
    fn collinear_contour_rejected() {
        let c = Contour { points: (0..5).map(|i| Point(i as f64, 2.0)).collect(), pixel_area: 5 };
        assert!(matches!(fit_building(&c), Err(Error::Validation(_))));
    }

    #[test]
    fn calipers_match_brute_force_on_rotations() {
        for deg in [0.0, 10.0, 33.0, 60.0, 89.0] {
            let m = rasterize_rect(60, 60, Point(30.0, 30.0), (30.0, 12.0), deg);
            let c = &trace_contours(&m)[0];
            let rect = min_area_rect(&c.points).unwrap();
            let brute = brute_min_rect_area(&c.points);
            assert!((rect.area() - brute).abs() < 1e-6, "{deg}: {} vs {brute}", rect.area());
        }
    }
}
