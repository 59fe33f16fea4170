//! Road centerlines: blur, binarize, Zhang-Suen thinning, then split the skeleton into
//! paths between endpoints and junctions.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::category::Category;
use crate::error::{Error, Result};
use crate::geom::{polyline_length, Point};
use crate::raster::gaussian_blur;
use crate::segment::CategoryMask;
use crate::vector::contour::pixel_center;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Centerline {
    pub category: Category,
    pub paths: Vec<Vec<Point>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterlineParams {
    pub blur_sigma: f64,
    /// Paths shorter than this (in pixels, see [`path_pixel_length`]) are dropped.
    pub prune_len: f64,
    pub stride: usize,
}

impl Default for CenterlineParams {
    fn default() -> Self {
        CenterlineParams { blur_sigma: 1.0, prune_len: 10.0, stride: 3 }
    }
}

// Neighbor bits: P2 (N) = bit 0, then clockwise through P9 (NW) = bit 7.
const NEIGHBORS: [(i64, i64); 8] = [(0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1)];

const fn bit(code: u8, k: usize) -> u8 {
    (code >> k) & 1
}

const fn removable(code: u8, second: bool) -> bool {
    let b = code.count_ones();
    let mut a = 0;
    let mut k = 0;
    while k < 8 {
        if bit(code, k) == 0 && bit(code, (k + 1) % 8) == 1 {
            a += 1;
        }
        k += 1;
    }
    // p(0)=P2, p(2)=P4, p(4)=P6, p(6)=P8
    let (c1, c2) = if !second {
        (bit(code, 0) * bit(code, 2) * bit(code, 4), bit(code, 2) * bit(code, 4) * bit(code, 6))
    } else {
        (bit(code, 0) * bit(code, 2) * bit(code, 6), bit(code, 0) * bit(code, 4) * bit(code, 6))
    };
    b >= 2 && b <= 6 && a == 1 && c1 == 0 && c2 == 0
}

const fn removal_table(second: bool) -> [bool; 256] {
    let mut t = [false; 256];
    let mut c = 0;
    while c < 256 {
        t[c] = removable(c as u8, second);
        c += 1;
    }
    t
}

const REMOVE_FIRST: [bool; 256] = removal_table(false);
const REMOVE_SECOND: [bool; 256] = removal_table(true);

fn neighbor_code(bits: &[bool], w: usize, h: usize, x: usize, y: usize) -> u8 {
    let mut code = 0u8;
    for (k, (dx, dy)) in NEIGHBORS.iter().enumerate() {
        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
        if nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h && bits[ny as usize * w + nx as usize] {
            code |= 1 << k;
        }
    }
    code
}

/// Zhang-Suen thinning on a row-major binary grid. Pixels outside the grid are background.
pub fn zhang_suen(bits: &[bool], w: usize, h: usize) -> Vec<bool> {
    let mut img = bits.to_vec();
    let mut live: Vec<usize> = (0..img.len()).filter(|&i| img[i]).collect();
    loop {
        let mut changed = false;
        for table in [&REMOVE_FIRST, &REMOVE_SECOND] {
            let doomed: Vec<usize> =
                live.iter().copied().filter(|&i| table[neighbor_code(&img, w, h, i % w, i / w) as usize]).collect();
            if !doomed.is_empty() {
                changed = true;
                for &i in &doomed {
                    img[i] = false;
                }
                live.retain(|&i| img[i]);
            }
        }
        if !changed {
            return img;
        }
    }
}

/// Skeleton adjacency: 4-neighbors always connect; a diagonal neighbor connects only when
/// neither shared 4-neighbor is set, so staircases do not look like junctions.
fn skeleton_neighbors(set: &HashSet<(i64, i64)>, p: (i64, i64)) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(4);
    for (dx, dy) in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
        if set.contains(&(p.0 + dx, p.1 + dy)) {
            out.push((p.0 + dx, p.1 + dy));
        }
    }
    for (dx, dy) in [(1, 1), (-1, 1), (-1, -1), (1, -1)] {
        let q = (p.0 + dx, p.1 + dy);
        if set.contains(&q) && !set.contains(&(p.0 + dx, p.1)) && !set.contains(&(p.0, p.1 + dy)) {
            out.push(q);
        }
    }
    out
}

/// Splits skeleton pixels into maximal paths between nodes (pixels whose degree is not 2).
/// Closed loops without nodes come back with their first pixel repeated at the end.
pub fn skeleton_paths(pixels: &[(i64, i64)]) -> Vec<Vec<(i64, i64)>> {
    let set: HashSet<(i64, i64)> = pixels.iter().copied().collect();
    let mut order: Vec<(i64, i64)> = set.iter().copied().collect();
    order.sort_by_key(|&(x, y)| (y, x));
    let degree = |p: (i64, i64)| skeleton_neighbors(&set, p).len();
    let edge = |a: (i64, i64), b: (i64, i64)| if a <= b { (a, b) } else { (b, a) };
    let mut used: HashSet<((i64, i64), (i64, i64))> = HashSet::new();
    let mut paths = Vec::new();

    let walk = |start: (i64, i64), first: (i64, i64), used: &mut HashSet<_>| {
        let mut path = vec![start, first];
        used.insert(edge(start, first));
        let mut prev = start;
        let mut cur = first;
        while degree(cur) == 2 {
            let next = skeleton_neighbors(&set, cur).into_iter().find(|&q| q != prev && !used.contains(&edge(cur, q)));
            let Some(next) = next else { break };
            used.insert(edge(cur, next));
            path.push(next);
            prev = cur;
            cur = next;
            if cur == start {
                break;
            }
        }
        path
    };

    for &p in &order {
        let d = degree(p);
        if d == 2 {
            continue;
        }
        if d == 0 {
            paths.push(vec![p]);
            continue;
        }
        for q in skeleton_neighbors(&set, p) {
            if !used.contains(&edge(p, q)) {
                paths.push(walk(p, q, &mut used));
            }
        }
    }
    // Remaining pure cycles.
    for &p in &order {
        if degree(p) != 2 {
            continue;
        }
        if let Some(q) = skeleton_neighbors(&set, p).into_iter().find(|&q| !used.contains(&edge(p, q))) {
            paths.push(walk(p, q, &mut used));
        }
    }
    paths
}

/// Length of a pixel path counting the half pixel beyond each end, so a straight run of
/// `n` pixels measures `n`.
pub fn path_pixel_length(path: &[Point]) -> f64 {
    if path.is_empty() {
        0.0
    } else {
        polyline_length(path) + 1.0
    }
}

fn pixel_path_length(path: &[(i64, i64)]) -> f64 {
    let pts: Vec<Point> = path.iter().map(|&p| pixel_center(p)).collect();
    path_pixel_length(&pts)
}

/// Keeps every `stride`-th point and always both endpoints.
pub fn sparsify(path: &[Point], stride: usize) -> Vec<Point> {
    let stride = stride.max(1);
    let mut out: Vec<Point> = path.iter().step_by(stride).copied().collect();
    if !(path.len() - 1).is_multiple_of(stride) {
        out.push(*path.last().unwrap());
    }
    out
}

/// Binarized (threshold 128) Gaussian blur of a mask.
pub fn blur_binarize(mask: &CategoryMask, sigma: f64) -> Vec<bool> {
    let (w, h) = (mask.width() as usize, mask.height() as usize);
    let data: Vec<f64> = mask.bits().iter().map(|&b| if b { 255.0 } else { 0.0 }).collect();
    gaussian_blur(&data, w, h, sigma).into_iter().map(|v| v >= 128.0).collect()
}

pub fn extract_centerlines(mask: &CategoryMask, category: Category, params: CenterlineParams) -> Result<Centerline> {
    if !(params.blur_sigma >= 0.0) || !(params.prune_len >= 0.0) || params.stride == 0 {
        return Err(Error::Validation(format!("invalid centerline params {params:?}")));
    }
    let (w, h) = (mask.width() as usize, mask.height() as usize);
    let binary = blur_binarize(mask, params.blur_sigma);
    let skeleton = zhang_suen(&binary, w, h);
    let mut pixels: HashSet<(i64, i64)> =
        (0..w * h).filter(|&i| skeleton[i]).map(|i| ((i % w) as i64, (i / w) as i64)).collect();

    // Prune short spurs (endpoint to junction) until none remain, so the surviving
    // branches merge into maximal paths.
    loop {
        let list: Vec<(i64, i64)> = pixels.iter().copied().collect();
        let paths = skeleton_paths(&list);
        let mut removed = false;
        for path in &paths {
            if path.len() < 2 || path.first() == path.last() {
                continue;
            }
            let ends = [path[0], *path.last().unwrap()];
            let deg = |p| skeleton_neighbors(&pixels, p).len();
            let (d0, d1) = (deg(ends[0]), deg(ends[1]));
            let spur = (d0 == 1 && d1 >= 3) || (d1 == 1 && d0 >= 3);
            if spur && pixel_path_length(path) < params.prune_len {
                let junction = if d0 >= 3 { ends[0] } else { ends[1] };
                for p in path {
                    if *p != junction {
                        pixels.remove(p);
                    }
                }
                removed = true;
                break;
            }
        }
        if !removed {
            break;
        }
    }

    let list: Vec<(i64, i64)> = pixels.iter().copied().collect();
    let paths = skeleton_paths(&list)
        .into_iter()
        .filter(|p| p.len() >= 2 && pixel_path_length(p) >= params.prune_len)
        .map(|p| {
            let pts: Vec<Point> = p.iter().map(|&q| pixel_center(q)).collect();
            sparsify(&pts, params.stride)
        })
        .collect();
    Ok(Centerline { category, paths })
}
