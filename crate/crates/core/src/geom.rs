//! Small 2D geometry kernel shared by the vectorizer and the 3D builders.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// A 2D point. Serializes as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point(pub f64, pub f64);

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point(x, y)
    }

    pub fn x(self) -> f64 {
        self.0
    }

    pub fn y(self) -> f64 {
        self.1
    }

    pub fn dot(self, o: Point) -> f64 {
        self.0 * o.0 + self.1 * o.1
    }

    pub fn cross(self, o: Point) -> f64 {
        self.0 * o.1 - self.1 * o.0
    }

    pub fn norm(self) -> f64 {
        self.0.hypot(self.1)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Point {
        Point(-self.1, self.0)
    }

    pub fn normalized(self) -> Option<Point> {
        let n = self.norm();
        (n > 1e-12).then(|| self * (1.0 / n))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point(self.0 - o.0, self.1 - o.1)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point(self.0 * s, self.1 * s)
    }
}

/// Twice the signed triangle area; positive when `a, b, c` turn counter-clockwise
/// in a y-up frame.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Shoelace signed area of a closed ring (last point implicitly joins the first).
pub fn signed_area(ring: &[Point]) -> f64 {
    if ring.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..ring.len() {
        let a = ring[i];
        let b = ring[(i + 1) % ring.len()];
        acc += a.cross(b);
    }
    acc * 0.5
}

pub fn polygon_area(ring: &[Point]) -> f64 {
    signed_area(ring).abs()
}

pub fn perimeter(ring: &[Point]) -> f64 {
    if ring.len() < 2 {
        return 0.0;
    }
    (0..ring.len()).map(|i| ring[i].dist(ring[(i + 1) % ring.len()])).sum()
}

pub fn polyline_length(path: &[Point]) -> f64 {
    path.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// Distance from `p` to the segment `a`-`b`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 <= 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Distance from `p` to the boundary of a closed ring.
pub fn distance_to_ring(p: Point, ring: &[Point]) -> f64 {
    let n = ring.len();
    match n {
        0 => f64::INFINITY,
        1 => p.dist(ring[0]),
        _ => (0..n).map(|i| point_segment_distance(p, ring[i], ring[(i + 1) % n])).fold(f64::INFINITY, f64::min),
    }
}

/// Even-odd point-in-polygon test.
pub fn point_in_polygon(p: Point, ring: &[Point]) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a.1 > p.1) != (b.1 > p.1) {
            let x = a.0 + (p.1 - a.1) / (b.1 - a.1) * (b.0 - a.0);
            if p.0 < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.0 >= a.0.min(b.0) - 1e-12
        && p.0 <= a.0.max(b.0) + 1e-12
        && p.1 >= a.1.min(b.1) - 1e-12
        && p.1 <= a.1.max(b.1) + 1e-12
}

/// Closed-segment intersection test, including touching and collinear overlap.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Returns the first pair of non-adjacent ring edges that intersect, if any.
pub fn find_self_intersection(ring: &[Point]) -> Option<(usize, usize)> {
    let n = ring.len();
    if n < 4 {
        return None;
    }
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = (ring[j], ring[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn is_simple(ring: &[Point]) -> bool {
    ring.len() >= 3 && find_self_intersection(ring).is_none()
}

/// Removes consecutive coincident points, including a closing duplicate of the first point.
pub fn dedup_ring(ring: &[Point], tol: f64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(ring.len());
    for &p in ring {
        if out.last().is_none_or(|&q| q.dist(p) > tol) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].dist(*out.last().unwrap()) <= tol {
        out.pop();
    }
    out
}

/// Axis-aligned bounds `(min, max)`.
pub fn bounds(points: &[Point]) -> Option<(Point, Point)> {
    let first = *points.first()?;
    Some(
        points.iter().fold((first, first), |(lo, hi), p| {
            (Point(lo.0.min(p.0), lo.1.min(p.1)), Point(hi.0.max(p.0), hi.1.max(p.1)))
        }),
    )
}

/// Samples `n` points evenly spaced by arc length around a closed ring, starting at `ring[0]`.
pub fn resample_closed(ring: &[Point], n: usize) -> Vec<Point> {
    if ring.is_empty() || n == 0 {
        return Vec::new();
    }
    let total = perimeter(ring);
    if total <= 0.0 {
        return vec![ring[0]; 1];
    }
    let step = total / n as f64;
    let m = ring.len();
    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    let mut seg_start = 0.0;
    for k in 0..n {
        let target = k as f64 * step;
        loop {
            let len = ring[seg].dist(ring[(seg + 1) % m]);
            if target <= seg_start + len || seg == m - 1 {
                let t = if len > 0.0 { ((target - seg_start) / len).clamp(0.0, 1.0) } else { 0.0 };
                out.push(ring[seg].lerp(ring[(seg + 1) % m], t));
                break;
            }
            seg_start += len;
            seg += 1;
        }
    }
    out
}
