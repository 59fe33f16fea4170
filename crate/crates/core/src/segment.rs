//! Palette segmentation of a plan into one binary mask per element category.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::category::Category;
use crate::error::{Error, Result};
use crate::raster::RasterPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaletteEntry {
    pub category: Category,
    pub color: [u8; 3],
    /// Per-channel half-width of the accepted color box.
    pub tolerance: u8,
}

impl PaletteEntry {
    fn range(&self, c: usize) -> (i32, i32) {
        let v = self.color[c] as i32;
        let t = self.tolerance as i32;
        ((v - t).max(0), (v + t).min(255))
    }

    pub fn contains(&self, px: [u8; 3]) -> bool {
        (0..3).all(|c| {
            let (lo, hi) = self.range(c);
            (lo..=hi).contains(&(px[c] as i32))
        })
    }

    fn overlaps(&self, other: &PaletteEntry) -> bool {
        (0..3).all(|c| {
            let (a0, a1) = self.range(c);
            let (b0, b1) = other.range(c);
            a0 <= b1 && b0 <= a1
        })
    }
}

/// Reference colors with tolerances, one entry per category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    entries: Vec<PaletteEntry>,
}

pub const DEFAULT_TOLERANCE: u8 = 20;

impl Default for Palette {
    fn default() -> Self {
        Palette {
            entries: Category::ALL
                .iter()
                .map(|&category| PaletteEntry {
                    category,
                    color: category.default_color(),
                    tolerance: DEFAULT_TOLERANCE,
                })
                .collect(),
        }
    }
}

impl Palette {
    /// Builds a palette, checking that every category appears exactly once
    /// and that no two color boxes intersect.
    pub fn new(mut entries: Vec<PaletteEntry>) -> Result<Self> {
        for cat in Category::ALL {
            let n = entries.iter().filter(|e| e.category == cat).count();
            if n != 1 {
                return Err(Error::Config(format!("palette must list `{cat}` exactly once, found {n}")));
            }
        }
        if entries.len() != Category::ALL.len() {
            return Err(Error::Config("palette has extra entries".into()));
        }
        entries.sort_by_key(|e| e.category);
        let p = Palette { entries };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.entries.iter().enumerate() {
            if a.tolerance > 127 {
                return Err(Error::Config(format!("tolerance of `{}` must be at most 127", a.category)));
            }
            for b in &self.entries[i + 1..] {
                if a.overlaps(b) {
                    return Err(Error::PaletteOverlap {
                        first: a.category.to_string(),
                        second: b.category.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> &[PaletteEntry] {
        &self.entries
    }

    pub fn get(&self, category: Category) -> &PaletteEntry {
        self.entries.iter().find(|e| e.category == category).unwrap()
    }
}

/// Binary mask of one category. Foreground is stored as `true` and persisted as 255.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryMask {
    pub category: Category,
    width: u32,
    height: u32,
    bits: Vec<bool>,
}

impl CategoryMask {
    pub fn empty(category: Category, width: u32, height: u32) -> Self {
        CategoryMask { category, width, height, bits: vec![false; width as usize * height as usize] }
    }

    pub fn from_bits(category: Category, width: u32, height: u32, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width as usize * height as usize {
            return Err(Error::Validation(format!(
                "mask of {}x{} needs {} bits, got {}",
                width,
                height,
                width as usize * height as usize,
                bits.len()
            )));
        }
        Ok(CategoryMask { category, width, height, bits })
    }

    /// Builds a mask by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(category: Category, width: u32, height: u32, f: impl Fn(u32, u32) -> bool) -> Self {
        let bits = (0..height).flat_map(|y| (0..width).map(move |x| (x, y))).map(|(x, y)| f(x, y)).collect();
        CategoryMask { category, width, height, bits }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[y as usize * self.width as usize + x as usize]
    }

    /// Out-of-bounds reads are background.
    pub fn get_i(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && x < self.width as i64 && y < self.height as i64 && self.get(x as u32, y as u32)
    }

    pub fn set(&mut self, x: u32, y: u32, v: bool) {
        let w = self.width as usize;
        self.bits[y as usize * w + x as usize] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn to_png_bytes(&self) -> Result<Vec<u8>> {
        let raw = self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect();
        let img = image::GrayImage::from_raw(self.width, self.height, raw)
            .ok_or_else(|| Error::Invariant("mask buffer size mismatch".into()))?;
        let mut out = std::io::Cursor::new(Vec::new());
        img.write_to(&mut out, image::ImageFormat::Png)?;
        Ok(out.into_inner())
    }

    pub fn save_png(&self, path: &Path) -> Result<()> {
        let bytes = self.to_png_bytes()?;
        std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }

    /// Loads a grayscale mask; any nonzero luma is foreground.
    pub fn load_png(category: Category, path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let img = image::load_from_memory(&bytes)?.to_luma8();
        let (w, h) = img.dimensions();
        let bits = img.pixels().map(|p| p.0[0] >= 128).collect();
        CategoryMask::from_bits(category, w, h, bits)
    }
}

pub fn mask_file_name(category: Category) -> String {
    format!("mask_{category}.png")
}

/// Scans every pixel against each palette range. Masks come back in `Category::ALL` order.
pub fn segment(plan: &RasterPlan, palette: &Palette) -> Result<Vec<CategoryMask>> {
    palette.validate()?;
    let (w, h) = (plan.width(), plan.height());
    Ok(Category::ALL
        .iter()
        .map(|&cat| {
            let entry = palette.get(cat);
            let bits = plan.pixels().iter().map(|&px| entry.contains(px)).collect();
            CategoryMask { category: cat, width: w, height: h, bits }
        })
        .collect())
}
