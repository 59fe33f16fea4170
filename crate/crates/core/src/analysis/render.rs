//! Top-down raster rendering of overlays with a JSON legend sidecar.

use std::path::{Path, PathBuf};

use image::{ImageFormat, Rgb, RgbImage};
use serde::{Deserialize, Serialize};

use crate::analysis::{AnalysisOverlay, LegendEntry, OverlayKind};
use crate::error::{Error, Result};

const BACKGROUND: [u8; 3] = [255, 255, 255];
const ARROW_COLOR: [u8; 3] = [20, 20, 60];
/// Arrow length in meters per decade of accumulation (plus one for a single face).
const ARROW_METERS: f64 = 0.6;
/// One arrow per square cell of this size, on the face with the largest accumulation.
const ARROW_CELL_METERS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlayStats {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub bin_counts: Vec<usize>,
}

/// Content of the `analysis_<kind>.json` sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlayLegend {
    pub kind: OverlayKind,
    pub legend: Vec<LegendEntry>,
    pub stats: OverlayStats,
}

impl OverlayLegend {
    pub fn of(overlay: &AnalysisOverlay) -> Self {
        let range = overlay.value_range();
        OverlayLegend {
            kind: overlay.kind,
            legend: overlay.legend.clone(),
            stats: OverlayStats { min: range.map(|r| r.0), max: range.map(|r| r.1), bin_counts: overlay.bin_counts() },
        }
    }
}

struct Canvas {
    img: RgbImage,
    x0: f64,
    y1: f64,
    ppm: f64,
}

impl Canvas {
    /// World xy to continuous pixel coordinates (north up).
    fn to_px(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.x0) * self.ppm, (self.y1 - y) * self.ppm)
    }

    fn fill_triangle(&mut self, tri: &[[f64; 3]; 3], color: [u8; 3]) {
        let p = tri.map(|v| self.to_px(v[0], v[1]));
        let area = (p[1].0 - p[0].0) * (p[2].1 - p[0].1) - (p[1].1 - p[0].1) * (p[2].0 - p[0].0);
        if area == 0.0 {
            return;
        }
        let (w, h) = (self.img.width() as i64, self.img.height() as i64);
        let xs = p.map(|q| q.0);
        let ys = p.map(|q| q.1);
        let lo_x = (xs.iter().copied().fold(f64::MAX, f64::min).floor() as i64).max(0);
        let hi_x = (xs.iter().copied().fold(f64::MIN, f64::max).ceil() as i64).min(w - 1);
        let lo_y = (ys.iter().copied().fold(f64::MAX, f64::min).floor() as i64).max(0);
        let hi_y = (ys.iter().copied().fold(f64::MIN, f64::max).ceil() as i64).min(h - 1);
        let edge = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
        for j in lo_y..=hi_y {
            for i in lo_x..=hi_x {
                let c = (i as f64 + 0.5, j as f64 + 0.5);
                let (e0, e1, e2) = (edge(p[0], p[1], c), edge(p[1], p[2], c), edge(p[2], p[0], c));
                let inside =
                    if area > 0.0 { e0 >= 0.0 && e1 >= 0.0 && e2 >= 0.0 } else { e0 <= 0.0 && e1 <= 0.0 && e2 <= 0.0 };
                if inside {
                    self.img.put_pixel(i as u32, j as u32, Rgb(color));
                }
            }
        }
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), color: [u8; 3]) {
        let steps = (b.0 - a.0).abs().max((b.1 - a.1).abs()).ceil().max(1.0) as usize;
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            let (x, y) = (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t);
            if x >= 0.0 && y >= 0.0 && (x as u32) < self.img.width() && (y as u32) < self.img.height() {
                self.img.put_pixel(x as u32, y as u32, Rgb(color));
            }
        }
    }

    fn arrow(&mut self, from: (f64, f64), dir: (f64, f64), len: f64) {
        let tip = (from.0 + dir.0 * len, from.1 + dir.1 * len);
        self.line(from, tip, ARROW_COLOR);
        let head = (len * 0.3).max(1.0);
        for s in [-1.0, 1.0] {
            // Rotate the reversed direction by +-30 degrees.
            let (c, sn) = (0.866, 0.5 * s);
            let back = (-dir.0 * c + dir.1 * sn, -dir.0 * sn - dir.1 * c);
            self.line(tip, (tip.0 + back.0 * head, tip.1 + back.1 * head), ARROW_COLOR);
        }
    }
}

/// Rasterizes the overlay into an RGB image at `px_per_meter`.
pub fn rasterize_overlay(overlay: &AnalysisOverlay, px_per_meter: f64) -> Result<RgbImage> {
    if !(px_per_meter > 0.0 && px_per_meter.is_finite()) {
        return Err(Error::Validation(format!("px_per_meter must be positive, got {px_per_meter}")));
    }
    let (lo, hi) = overlay.bounds;
    let w = (((hi.0 - lo.0) * px_per_meter).ceil() as u32).max(1);
    let h = (((hi.1 - lo.1) * px_per_meter).ceil() as u32).max(1);
    let mut canvas = Canvas { img: RgbImage::from_pixel(w, h, Rgb(BACKGROUND)), x0: lo.0, y1: hi.1, ppm: px_per_meter };

    // Painter's order: lower faces first, index breaks ties.
    let mean_z = |f: &[[f64; 3]; 3]| (f[0][2] + f[1][2] + f[2][2]) / 3.0;
    let mut order: Vec<usize> = (0..overlay.len()).collect();
    order.sort_by(|&a, &b| mean_z(&overlay.faces[a]).total_cmp(&mean_z(&overlay.faces[b])).then(a.cmp(&b)));
    for &f in &order {
        canvas.fill_triangle(&overlay.faces[f], overlay.colors[f]);
    }
    if overlay.kind == OverlayKind::Drainage {
        let centroid = |f: usize| {
            let t = &overlay.faces[f];
            ((t[0][0] + t[1][0] + t[2][0]) / 3.0, (t[0][1] + t[1][1] + t[2][1]) / 3.0)
        };
        let mut cells: std::collections::BTreeMap<(i64, i64), usize> = std::collections::BTreeMap::new();
        for f in 0..overlay.len() {
            let [dx, dy] = overlay.flow[f];
            if dx == 0.0 && dy == 0.0 {
                continue;
            }
            let (x, y) = centroid(f);
            let key = ((x / ARROW_CELL_METERS).floor() as i64, (y / ARROW_CELL_METERS).floor() as i64);
            let best = cells.entry(key).or_insert(f);
            if overlay.values[f] > overlay.values[*best] {
                *best = f;
            }
        }
        for &f in cells.values() {
            let [dx, dy] = overlay.flow[f];
            let (x, y) = centroid(f);
            let len = ARROW_METERS * (1.0 + overlay.values[f].log10()) * px_per_meter;
            canvas.arrow(canvas.to_px(x, y), (dx, -dy), len);
        }
    }
    Ok(canvas.img)
}

/// Path of the sidecar legend next to a rendered PNG.
pub fn sidecar_path(png: &Path) -> PathBuf {
    png.with_extension("json")
}

/// Writes the overlay PNG to `out` and its legend to the `.json` sidecar beside it.
pub fn render_overlay(overlay: &AnalysisOverlay, out: &Path, px_per_meter: f64) -> Result<OverlayLegend> {
    let img = rasterize_overlay(overlay, px_per_meter)?;
    let mut bytes = Vec::new();
    img.write_to(&mut std::io::Cursor::new(&mut bytes), ImageFormat::Png)?;
    std::fs::write(out, bytes).map_err(|e| Error::io(out, e))?;
    let legend = OverlayLegend::of(overlay);
    let json =
        serde_json::to_string_pretty(&legend).map_err(|e| Error::Invariant(format!("legend serialization: {e}")))?;
    let side = sidecar_path(out);
    std::fs::write(&side, json).map_err(|e| Error::io(&side, e))?;
    Ok(legend)
}
