//! Free-form closed regions: green space, water, pavement (and the red-line boundary).

use serde::{Deserialize, Serialize};

use crate::category::Category;
use crate::error::{Error, Result};
use crate::geom::{is_simple, Point};
use crate::segment::CategoryMask;
use crate::vector::bezier::{sample_closed_curve, subdivide_closed};
use crate::vector::contour::trace_contours;
use crate::vector::morph::morphological_clean;
use crate::vector::simplify::rdp_closed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionOutline {
    pub category: Category,
    /// Simplified vertex ring, not repeated at the end.
    pub polygon: Vec<Point>,
    /// Arc-length samples of the fitted curve; the last point repeats the first.
    pub smooth_samples: Vec<Point>,
    pub area_px: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionParams {
    pub min_area: f64,
    pub epsilon: f64,
    pub sample_step: f64,
    /// Square structuring element for the open/close cleanup; 1 disables it.
    pub kernel: usize,
}

impl Default for RegionParams {
    fn default() -> Self {
        RegionParams { min_area: 50.0, epsilon: 2.0, sample_step: 4.0, kernel: 3 }
    }
}

/// Halvings of epsilon tried when a simplified ring self-intersects.
const SIMPLIFY_RETRIES: usize = 4;

/// Long simplified edges are split to at most this many epsilons before curve fitting.
const CONTROL_EDGE_FACTOR: f64 = 2.0;

/// Cleans the mask, traces outer contours, drops small ones, simplifies with RDP and fits a
/// closed quadratic Bezier (through the subdivided ring) that is resampled by arc length.
pub fn extract_regions(mask: &CategoryMask, category: Category, params: RegionParams) -> Result<Vec<RegionOutline>> {
    if !(params.min_area >= 0.0) || !(params.epsilon > 0.0) || !(params.sample_step >= 1.0) {
        return Err(Error::Validation(format!(
            "region params need min_area >= 0, epsilon > 0, sample_step >= 1: {params:?}"
        )));
    }
    let cleaned = morphological_clean(mask, params.kernel, true)?;
    let mut out = Vec::new();
    for contour in trace_contours(&cleaned) {
        let area = contour.pixel_area as f64;
        if area < params.min_area {
            continue;
        }
        let Some(polygon) = simple_simplification(&contour.points, params.epsilon) else {
            log::warn!("dropping {category} region of {area} px: outline self-intersects");
            continue;
        };
        let control = subdivide_closed(&polygon, CONTROL_EDGE_FACTOR * params.epsilon);
        let smooth_samples = sample_closed_curve(&control, params.sample_step);
        out.push(RegionOutline { category, polygon, smooth_samples, area_px: area });
    }
    Ok(out)
}

fn simple_simplification(ring: &[Point], epsilon: f64) -> Option<Vec<Point>> {
    let mut eps = epsilon;
    for _ in 0..=SIMPLIFY_RETRIES {
        let poly = rdp_closed(ring, eps);
        if is_simple(&poly) {
            return Some(poly);
        }
        eps /= 2.0;
    }
    is_simple(ring).then(|| ring.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::distance_to_ring;

    fn disc(w: u32, c: (f64, f64), r: f64) -> CategoryMask {
        CategoryMask::from_fn(Category::Water, w, w, |x, y| {
            let (dx, dy) = (x as f64 + 0.5 - c.0, y as f64 + 0.5 - c.1);
            dx * dx + dy * dy <= r * r
        })
    }

    #[test]
    fn circle_samples_stay_near_true_circle() {
        let m = disc(120, (60.0, 60.0), 40.0);
        let params = RegionParams { min_area: 100.0, epsilon: 2.0, ..Default::default() };
        let regions = extract_regions(&m, Category::Water, params).unwrap();
        assert_eq!(regions.len(), 1);
        let worst =
            regions[0].smooth_samples.iter().map(|p| (p.dist(Point(60.0, 60.0)) - 40.0).abs()).fold(0.0, f64::max);
        assert!(worst <= 2.5, "worst deviation {worst}");
        assert_eq!(regions[0].smooth_samples.first(), regions[0].smooth_samples.last());
    }

    #[test]
    fn small_circle_filtered_by_area() {
        let m = disc(30, (15.0, 15.0), 4.0);
        assert!(m.count() < 100);
        let params = RegionParams { min_area: 100.0, ..Default::default() };
        assert!(extract_regions(&m, Category::Water, params).unwrap().is_empty());
    }

    #[test]
    fn square_collapses_to_few_vertices() {
        let m =
            CategoryMask::from_fn(Category::Pavement, 60, 60, |x, y| (10..50).contains(&x) && (10..50).contains(&y));
        let regions = extract_regions(&m, Category::Pavement, RegionParams::default()).unwrap();
        assert_eq!(regions.len(), 1);
        let poly = &regions[0].polygon;
        assert!(poly.len() <= 8, "{} vertices", poly.len());
        // Every traced ring point is within epsilon of the simplified polygon.
        let traced = &trace_contours(&m)[0].points;
        for p in traced {
            assert!(distance_to_ring(*p, poly) <= 2.0 + 1e-9);
        }
        assert_eq!(regions[0].area_px, 1600.0);
    }

    #[test]
    fn bad_params_rejected() {
        let m = CategoryMask::empty(Category::Water, 4, 4);
        let p = RegionParams { epsilon: 0.0, ..Default::default() };
        assert!(extract_regions(&m, Category::Water, p).is_err());
    }
}
