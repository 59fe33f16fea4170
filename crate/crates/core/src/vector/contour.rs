//! Outer-boundary tracing of 8-connected components.

use serde::{Deserialize, Serialize};

use crate::geom::{signed_area, Point};
use crate::segment::CategoryMask;

/// Moore neighborhood, clockwise on a y-down raster starting east.
pub(crate) const DIRS: [(i64, i64); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];

/// Closed ring of boundary pixel centers.
///
/// Coordinates are continuous pixel units: pixel `(i, j)` covers `[i, i+1) x [j, j+1)`
/// and its center is `(i + 0.5, j + 0.5)`. Outer rings run counter-clockwise as seen on
/// screen (y down), which makes their shoelace area negative in raw pixel coordinates
/// and positive once y is flipped into the world frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub points: Vec<Point>,
    /// Number of foreground pixels in the traced component.
    pub pixel_area: usize,
}

impl Contour {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// One traced component, before the ring-size filter `trace_contours` applies.
#[derive(Debug, Clone)]
pub(crate) struct Component {
    pub ring: Vec<(i64, i64)>,
    pub pixel_area: usize,
}

pub(crate) fn pixel_center((x, y): (i64, i64)) -> Point {
    Point(x as f64 + 0.5, y as f64 + 0.5)
}

/// Labels 8-connected components in raster order of their first pixel and traces each
/// outer boundary with Moore-neighbor following.
pub(crate) fn trace_components(mask: &CategoryMask) -> Vec<Component> {
    let (w, h) = (mask.width() as usize, mask.height() as usize);
    let bits = mask.bits();
    let mut label = vec![0u32; w * h];
    let mut next = 0u32;
    let mut out = Vec::new();
    let mut stack = Vec::new();

    for start in 0..w * h {
        if !bits[start] || label[start] != 0 {
            continue;
        }
        next += 1;
        label[start] = next;
        stack.push(start);
        let mut area = 0;
        while let Some(i) = stack.pop() {
            area += 1;
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            for (dx, dy) in DIRS {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if bits[j] && label[j] == 0 {
                    label[j] = next;
                    stack.push(j);
                }
            }
        }
        let s = ((start % w) as i64, (start / w) as i64);
        let mut ring = moore_trace(mask, s);
        // Moore sweeping clockwise walks the outer boundary clockwise on screen.
        if ring.len() >= 3 {
            let pts: Vec<Point> = ring.iter().map(|&p| pixel_center(p)).collect();
            if signed_area(&pts) > 0.0 {
                ring[1..].reverse();
            }
        }
        out.push(Component { ring, pixel_area: area });
    }
    out
}

fn dir_index(dx: i64, dy: i64) -> usize {
    DIRS.iter().position(|&d| d == (dx, dy)).expect("unit step")
}

/// `start` must be the first foreground pixel of its component in raster order, so its
/// west neighbor is background.
fn moore_trace(mask: &CategoryMask, start: (i64, i64)) -> Vec<(i64, i64)> {
    let fg = |p: (i64, i64)| mask.get_i(p.0, p.1);
    let mut ring = vec![start];
    let mut p = start;
    let mut back = 4; // west
    let mut first_step: Option<(i64, i64)> = None;
    loop {
        let mut found = None;
        for k in 1..=8 {
            let d = (back + k) % 8;
            let q = (p.0 + DIRS[d].0, p.1 + DIRS[d].1);
            if fg(q) {
                found = Some((d, q));
                break;
            }
        }
        let Some((d, q)) = found else {
            return ring; // isolated pixel
        };
        if p == start {
            match first_step {
                None => first_step = Some(q),
                Some(f) if f == q => {
                    ring.pop();
                    return ring;
                }
                Some(_) => {}
            }
        }
        // The last background cell examined before `q`, seen from `q`.
        let c = (p.0 + DIRS[(d + 7) % 8].0, p.1 + DIRS[(d + 7) % 8].1);
        back = dir_index(c.0 - q.0, c.1 - q.1);
        ring.push(q);
        p = q;
    }
}

/// Outer boundary rings of each 8-connected foreground component with at least 3
/// ring points. Empty masks yield an empty list.
pub fn trace_contours(mask: &CategoryMask) -> Vec<Contour> {
    trace_components(mask)
        .into_iter()
        .filter(|c| c.ring.len() >= 3)
        .map(|c| Contour { points: c.ring.iter().map(|&p| pixel_center(p)).collect(), pixel_area: c.pixel_area })
        .collect()
}
