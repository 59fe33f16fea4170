//! Closed piecewise-quadratic Bezier curves through polygon edge midpoints.

use crate::geom::{perimeter, resample_closed, Point};

/// Flattening resolution per quadratic segment.
const FLATTEN_STEPS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSegment {
    pub start: Point,
    pub control: Point,
    pub end: Point,
}

impl QuadSegment {
    pub fn eval(&self, t: f64) -> Point {
        let s = 1.0 - t;
        self.start * (s * s) + self.control * (2.0 * s * t) + self.end * (t * t)
    }
}

/// One segment per vertex: the curve runs from the midpoint of the incoming edge to the
/// midpoint of the outgoing edge, with the vertex as control point.
pub fn closed_quadratic(vertices: &[Point]) -> Vec<QuadSegment> {
    let n = vertices.len();
    if n < 3 {
        return Vec::new();
    }
    (0..n)
        .map(|i| {
            let prev = vertices[(i + n - 1) % n];
            let v = vertices[i];
            let next = vertices[(i + 1) % n];
            QuadSegment { start: prev.lerp(v, 0.5), control: v, end: v.lerp(next, 0.5) }
        })
        .collect()
}

/// Dense closed polyline approximating the curve, without a repeated closing point.
pub fn flatten(segments: &[QuadSegment]) -> Vec<Point> {
    let mut out = Vec::with_capacity(segments.len() * FLATTEN_STEPS);
    for seg in segments {
        for k in 0..FLATTEN_STEPS {
            out.push(seg.eval(k as f64 / FLATTEN_STEPS as f64));
        }
    }
    out
}

/// Splits every edge of a closed ring into equal pieces no longer than `max_len`.
/// Fitting through the refined ring keeps corner cutting within about `0.18 * max_len`.
pub fn subdivide_closed(vertices: &[Point], max_len: f64) -> Vec<Point> {
    let n = vertices.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        let pieces = (a.dist(b) / max_len).ceil().max(1.0) as usize;
        out.extend((0..pieces).map(|k| a.lerp(b, k as f64 / pieces as f64)));
    }
    out
}

/// Samples the closed curve at (approximately) uniform arc-length spacing `step`.
/// The returned ring is explicitly closed: its last point repeats the first.
pub fn sample_closed_curve(vertices: &[Point], step: f64) -> Vec<Point> {
    let dense = flatten(&closed_quadratic(vertices));
    if dense.is_empty() {
        return Vec::new();
    }
    let n = ((perimeter(&dense) / step).round() as usize).max(3);
    let mut samples = resample_closed(&dense, n);
    samples.push(samples[0]);
    samples
}
