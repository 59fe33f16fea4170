//! Planting extraction: small blobs become single trees via their minimum enclosing
//! circle, larger "cloudy" outlines become clusters with evenly spaced planting points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{perimeter, resample_closed, Point};
use crate::segment::CategoryMask;
use crate::vector::contour::{pixel_center, trace_components};

/// Components with fewer pixels than this are single trees.
pub const SINGLE_TREE_MAX_AREA: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn contains(&self, p: Point, eps: f64) -> bool {
        p.dist(self.center) <= self.radius + eps
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleTree {
    pub center: Point,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantCluster {
    pub outline: Vec<Point>,
    pub points: Vec<Point>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PlantingPlan {
    pub singles: Vec<SingleTree>,
    pub clusters: Vec<PlantCluster>,
}

impl PlantingPlan {
    pub fn is_empty(&self) -> bool {
        self.singles.is_empty() && self.clusters.is_empty()
    }
}

const EPS: f64 = 1e-9;

fn circle_two(a: Point, b: Point) -> Circle {
    Circle { center: a.lerp(b, 0.5), radius: a.dist(b) / 2.0 }
}

fn circle_three(a: Point, b: Point, c: Point) -> Circle {
    let (bx, by) = (b.0 - a.0, b.1 - a.1);
    let (cx, cy) = (c.0 - a.0, c.1 - a.1);
    let d = 2.0 * (bx * cy - by * cx);
    if d.abs() < 1e-12 {
        // Collinear: the widest pair spans the others.
        let cands = [circle_two(a, b), circle_two(a, c), circle_two(b, c)];
        return cands.into_iter().max_by(|p, q| p.radius.total_cmp(&q.radius)).unwrap();
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = Point(a.0 + ux, a.1 + uy);
    Circle { center, radius: center.dist(a).max(center.dist(b)).max(center.dist(c)) }
}

/// Minimum enclosing circle (Welzl's incremental form, deterministic point order).
pub fn min_enclosing_circle(points: &[Point]) -> Option<Circle> {
    let (&first, rest) = points.split_first()?;
    let mut c = Circle { center: first, radius: 0.0 };
    for (i, &p) in rest.iter().enumerate() {
        if c.contains(p, EPS) {
            continue;
        }
        let i = i + 1;
        c = Circle { center: p, radius: 0.0 };
        for j in 0..i {
            let q = points[j];
            if c.contains(q, EPS) {
                continue;
            }
            c = circle_two(p, q);
            for &r in &points[..j] {
                if !c.contains(r, EPS) {
                    c = circle_three(p, q, r);
                }
            }
        }
    }
    Some(c)
}

/// Splits plant components into singles (area < 30 px) and clusters. Singles record the
/// minimum enclosing circle of their boundary pixel centers grown by half a pixel; clusters
/// keep their outline and `round(perimeter / interval)` points spaced evenly along it.
pub fn extract_plantings(mask: &CategoryMask, interval: f64) -> Result<PlantingPlan> {
    if !(interval >= 1.0) {
        return Err(Error::Validation(format!("planting interval must be >= 1, got {interval}")));
    }
    let mut plan = PlantingPlan::default();
    for comp in trace_components(mask) {
        let ring: Vec<Point> = comp.ring.iter().map(|&p| pixel_center(p)).collect();
        if comp.pixel_area < SINGLE_TREE_MAX_AREA {
            let c = min_enclosing_circle(&ring).expect("component has pixels");
            plan.singles.push(SingleTree { center: c.center, radius: c.radius + 0.5 });
        } else {
            let n = ((perimeter(&ring) / interval).round() as usize).max(1);
            let points = resample_closed(&ring, n);
            plan.clusters.push(PlantCluster { outline: ring, points });
        }
    }
    Ok(plan)
}
