use std::collections::HashMap;

use crate::category::Category;
use crate::error::{Error, Result};

/// Triangles with less area than this (m²) count as degenerate.
pub const MIN_TRIANGLE_AREA: f64 = 1e-9;

/// Category-tagged triangle mesh in world meters (x east, y north, z up).
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh3D {
    pub category: Category,
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[u32; 3]>,
    pub color: [u8; 3],
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn length(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

impl Mesh3D {
    pub fn new(category: Category) -> Self {
        Mesh3D { category, vertices: Vec::new(), triangles: Vec::new(), color: category.default_color() }
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn push_vertex(&mut self, v: [f64; 3]) -> u32 {
        self.vertices.push(v);
        (self.vertices.len() - 1) as u32
    }

    /// Appends another mesh's geometry, keeping this mesh's category and color.
    pub fn append(&mut self, other: &Mesh3D) {
        let base = self.vertices.len() as u32;
        self.vertices.extend_from_slice(&other.vertices);
        self.triangles.extend(other.triangles.iter().map(|t| t.map(|i| i + base)));
    }

    pub fn triangle(&self, t: usize) -> [[f64; 3]; 3] {
        self.triangles[t].map(|i| self.vertices[i as usize])
    }

    /// Unnormalized normal; its length is twice the triangle area.
    pub fn face_cross(&self, t: usize) -> [f64; 3] {
        let [a, b, c] = self.triangle(t);
        cross(sub(b, a), sub(c, a))
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        length(self.face_cross(t)) / 2.0
    }

    pub fn face_normal(&self, t: usize) -> [f64; 3] {
        let n = self.face_cross(t);
        let l = length(n);
        [n[0] / l, n[1] / l, n[2] / l]
    }

    pub fn centroid(&self, t: usize) -> [f64; 3] {
        let [a, b, c] = self.triangle(t);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0, (a[2] + b[2] + c[2]) / 3.0]
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Signed enclosed volume (divergence theorem); positive for outward-facing triangles.
    pub fn signed_volume(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| {
                let [a, b, c] = self.triangle(t);
                dot(a, cross(b, c)) / 6.0
            })
            .sum()
    }

    /// Undirected edge -> number of incident triangles.
    pub fn edge_counts(&self) -> HashMap<(u32, u32), usize> {
        let mut counts = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        counts
    }

    pub fn is_closed(&self) -> bool {
        !self.triangles.is_empty() && self.edge_counts().values().all(|&c| c == 2)
    }

    /// Every edge borders one or two triangles.
    pub fn is_manifold_with_boundary(&self) -> bool {
        self.edge_counts().values().all(|&c| c == 1 || c == 2)
    }

    pub fn bounds(&self) -> Option<([f64; 3], [f64; 3])> {
        let first = *self.vertices.first()?;
        Some(self.vertices.iter().fold((first, first), |(lo, hi), v| {
            ([lo[0].min(v[0]), lo[1].min(v[1]), lo[2].min(v[2])], [hi[0].max(v[0]), hi[1].max(v[1]), hi[2].max(v[2])])
        }))
    }

    /// Checks index range, finiteness and triangle area.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len() as u32;
        if let Some(v) = self.vertices.iter().find(|v| v.iter().any(|c| !c.is_finite())) {
            return Err(Error::Invariant(format!("{} mesh has non-finite vertex {v:?}", self.category)));
        }
        for (i, t) in self.triangles.iter().enumerate() {
            if t.iter().any(|&k| k >= n) {
                return Err(Error::Invariant(format!("{} mesh triangle {i} indexes past {n} vertices", self.category)));
            }
            if self.triangle_area(i) <= MIN_TRIANGLE_AREA {
                return Err(Error::Invariant(format!("{} mesh triangle {i} is degenerate", self.category)));
            }
        }
        Ok(())
    }

    /// Drops triangles below [`MIN_TRIANGLE_AREA`].
    pub(crate) fn drop_degenerate(&mut self) {
        let keep: Vec<bool> = (0..self.triangles.len()).map(|t| self.triangle_area(t) > MIN_TRIANGLE_AREA).collect();
        let mut k = keep.iter();
        self.triangles.retain(|_| *k.next().unwrap());
    }
}
