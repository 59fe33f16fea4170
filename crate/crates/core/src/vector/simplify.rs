//! Ramer-Douglas-Peucker polyline simplification.

use crate::geom::{point_segment_distance, Point};

/// Indices of the points kept by RDP with tolerance `epsilon`, in increasing order.
/// Endpoints are always kept. A point is kept when its distance to the chord of its
/// current span exceeds `epsilon`; ties pick the lowest index.
pub fn rdp_indices(line: &[Point], epsilon: f64) -> Vec<usize> {
    let n = line.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut keep = vec![false; n];
    keep[0] = true;
    keep[n - 1] = true;
    let mut spans = vec![(0usize, n - 1)];
    while let Some((a, b)) = spans.pop() {
        if b <= a + 1 {
            continue;
        }
        let mut far = (a, -1.0);
        for i in a + 1..b {
            let d = point_segment_distance(line[i], line[a], line[b]);
            if d > far.1 {
                far = (i, d);
            }
        }
        if far.1 > epsilon {
            keep[far.0] = true;
            spans.push((a, far.0));
            spans.push((far.0, b));
        }
    }
    keep.iter().enumerate().filter(|(_, &k)| k).map(|(i, _)| i).collect()
}

pub fn rdp(line: &[Point], epsilon: f64) -> Vec<Point> {
    rdp_indices(line, epsilon).into_iter().map(|i| line[i]).collect()
}

/// Simplifies a closed ring by splitting it at `ring[0]` and the point farthest from it.
/// The result is a subsequence of the ring starting at `ring[0]`.
pub fn rdp_closed(ring: &[Point], epsilon: f64) -> Vec<Point> {
    let n = ring.len();
    if n <= 3 {
        return ring.to_vec();
    }
    let mut far = (0, -1.0);
    for (i, p) in ring.iter().enumerate().skip(1) {
        let d = p.dist(ring[0]);
        if d > far.1 {
            far = (i, d);
        }
    }
    let f = far.0;
    let first = rdp_indices(&ring[..=f], epsilon);
    let mut second_line: Vec<Point> = ring[f..].to_vec();
    second_line.push(ring[0]);
    let second = rdp_indices(&second_line, epsilon);
    let mut out: Vec<Point> = first.iter().map(|&i| ring[i]).collect();
    out.extend(second[1..second.len() - 1].iter().map(|&i| ring[f + i]));
    if out.len() < 3 {
        return ring.to_vec();
    }
    out
}
