//! Synthetic plan drawing, used by the examples and tests.
//!
//! Shapes are painted in insertion order with each category's default color; a pixel is
//! covered when its center lies inside the shape.

use crate::category::Category;
use crate::error::Result;
use crate::geom::{point_in_polygon, point_segment_distance, Point};
use crate::raster::RasterPlan;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Polygon(Vec<Point>),
    Ellipse {
        center: Point,
        rx: f64,
        ry: f64,
    },
    /// Thick polyline: every point within `width / 2` of a segment.
    Stroke {
        points: Vec<Point>,
        width: f64,
    },
}

impl Shape {
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Shape {
        Shape::Polygon(vec![Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)])
    }

    pub fn rotated_rect(center: Point, w: f64, h: f64, angle_deg: f64) -> Shape {
        let (s, c) = angle_deg.to_radians().sin_cos();
        let corners = [(-w, -h), (w, -h), (w, h), (-w, h)]
            .map(|(dx, dy)| Point(center.0 + 0.5 * (dx * c - dy * s), center.1 + 0.5 * (dx * s + dy * c)));
        Shape::Polygon(corners.to_vec())
    }

    pub fn ellipse(cx: f64, cy: f64, rx: f64, ry: f64) -> Shape {
        Shape::Ellipse { center: Point(cx, cy), rx, ry }
    }

    pub fn disc(cx: f64, cy: f64, r: f64) -> Shape {
        Shape::ellipse(cx, cy, r, r)
    }

    pub fn polyline(points: Vec<(f64, f64)>, width: f64) -> Shape {
        Shape::Stroke { points: points.into_iter().map(|(x, y)| Point(x, y)).collect(), width }
    }

    /// Smooth star-shaped outline `r(t) = radius * (1 + amp * cos(lobes * t + phase))`,
    /// sampled densely as a polygon.
    pub fn blob(center: Point, radius: f64, amp: f64, lobes: u32, phase: f64) -> Shape {
        Shape::Polygon(blob_ring(center, radius, amp, lobes, phase, 360))
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Shape::Polygon(ring) => point_in_polygon(p, ring),
            Shape::Ellipse { center, rx, ry } => {
                let (dx, dy) = ((p.0 - center.0) / rx, (p.1 - center.1) / ry);
                dx * dx + dy * dy <= 1.0
            }
            Shape::Stroke { points, width } => {
                points.windows(2).any(|s| point_segment_distance(p, s[0], s[1]) <= width / 2.0)
            }
        }
    }
}

/// Sample ring of the curve described in [`Shape::blob`].
pub fn blob_ring(center: Point, radius: f64, amp: f64, lobes: u32, phase: f64, n: usize) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let t = i as f64 / n as f64 * std::f64::consts::TAU;
            let r = radius * (1.0 + amp * (lobes as f64 * t + phase).cos());
            Point(center.0 + r * t.cos(), center.1 + r * t.sin())
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct PlanBuilder {
    width: u32,
    height: u32,
    background: [u8; 3],
    shapes: Vec<([u8; 3], Shape)>,
}

impl PlanBuilder {
    /// White canvas.
    pub fn new(width: u32, height: u32) -> Self {
        PlanBuilder { width, height, background: [255, 255, 255], shapes: Vec::new() }
    }

    pub fn background(mut self, color: [u8; 3]) -> Self {
        self.background = color;
        self
    }

    pub fn with(self, category: Category, shape: Shape) -> Self {
        self.with_color(category.default_color(), shape)
    }

    pub fn with_color(mut self, color: [u8; 3], shape: Shape) -> Self {
        self.shapes.push((color, shape));
        self
    }

    pub fn rasterize(&self, scale: f64) -> Result<RasterPlan> {
        let mut plan = RasterPlan::filled(self.width, self.height, self.background, scale)?;
        for (color, shape) in &self.shapes {
            for y in 0..self.height {
                for x in 0..self.width {
                    if shape.contains(Point(x as f64 + 0.5, y as f64 + 0.5)) {
                        plan.set(x, y, *color);
                    }
                }
            }
        }
        Ok(plan)
    }
}

/// A 256 x 256 park: red-line site boundary, lawn, a lake, a curved plaza, two buildings
/// (one rotated), a winding path, a city road along the south edge, five trees and a grove.
pub fn sample_park() -> PlanBuilder {
    let site = vec![(6.0, 6.0), (250.0, 6.0), (250.0, 250.0), (6.0, 250.0), (6.0, 6.0)];
    PlanBuilder::new(256, 256)
        .with(Category::GreenSpace, Shape::rect(8.0, 8.0, 248.0, 224.0))
        .with(Category::RedLine, Shape::polyline(site, 3.0))
        .with(Category::CityRoad, Shape::rect(8.0, 228.0, 248.0, 244.0))
        .with(Category::Water, Shape::blob(Point(170.0, 80.0), 38.0, 0.12, 3, 0.4))
        .with(Category::Pavement, Shape::blob(Point(70.0, 160.0), 26.0, 0.1, 4, 0.0))
        .with(Category::Building, Shape::rect(24.0, 24.0, 64.0, 52.0))
        .with(Category::Building, Shape::rotated_rect(Point(190.0, 175.0), 30.0, 18.0, 30.0))
        .with(
            Category::Road,
            Shape::polyline(vec![(20.0, 110.0), (70.0, 100.0), (120.0, 120.0), (150.0, 150.0), (160.0, 215.0)], 5.0),
        )
        .with(Category::Plant, Shape::disc(100.0, 40.0, 2.5))
        .with(Category::Plant, Shape::disc(115.0, 48.0, 2.5))
        .with(Category::Plant, Shape::disc(130.0, 40.0, 2.5))
        .with(Category::Plant, Shape::disc(30.0, 200.0, 2.5))
        .with(Category::Plant, Shape::disc(120.0, 200.0, 2.5))
        .with(Category::Plant, Shape::blob(Point(215.0, 125.0), 14.0, 0.2, 5, 0.0))
}
