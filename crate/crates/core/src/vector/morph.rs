use crate::error::{Error, Result};
use crate::segment::CategoryMask;

/// Binary opening then closing (or closing then opening) with a `kernel x kernel` square.
/// Pixels outside the image are ignored by both erosion and dilation.
pub fn morphological_clean(mask: &CategoryMask, kernel: usize, open_then_close: bool) -> Result<CategoryMask> {
    if kernel == 0 || kernel.is_multiple_of(2) {
        return Err(Error::Validation(format!("kernel must be odd and >= 1, got {kernel}")));
    }
    if kernel == 1 {
        return Ok(mask.clone());
    }
    let r = kernel / 2;
    let (w, h) = (mask.width() as usize, mask.height() as usize);
    let bits = mask.bits().to_vec();
    let open = |b: Vec<bool>| dilate(&erode(&b, w, h, r), w, h, r);
    let close = |b: Vec<bool>| erode(&dilate(&b, w, h, r), w, h, r);
    let out = if open_then_close { close(open(bits)) } else { open(close(bits)) };
    CategoryMask::from_bits(mask.category, mask.width(), mask.height(), out)
}

fn erode(b: &[bool], w: usize, h: usize, r: usize) -> Vec<bool> {
    sweep(b, w, h, r, true)
}

fn dilate(b: &[bool], w: usize, h: usize, r: usize) -> Vec<bool> {
    sweep(b, w, h, r, false)
}

/// Separable min (`all`) or max filter over a square window.
fn sweep(b: &[bool], w: usize, h: usize, r: usize, all: bool) -> Vec<bool> {
    let reduce = |mut it: std::ops::RangeInclusive<usize>, get: &dyn Fn(usize) -> bool| {
        if all {
            it.all(get)
        } else {
            it.any(get)
        }
    };
    let mut rows = vec![false; b.len()];
    for y in 0..h {
        for x in 0..w {
            let (lo, hi) = (x.saturating_sub(r), (x + r).min(w - 1));
            rows[y * w + x] = reduce(lo..=hi, &|xx| b[y * w + xx]);
        }
    }
    let mut out = vec![false; b.len()];
    for y in 0..h {
        let (lo, hi) = (y.saturating_sub(r), (y + r).min(h - 1));
        for x in 0..w {
            out[y * w + x] = reduce(lo..=hi, &|yy| rows[yy * w + x]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Category;

    #[test]
    fn unit_kernel_is_identity() {
        let m = CategoryMask::from_fn(Category::Water, 9, 9, |x, y| (x * y) % 4 == 1);
        assert_eq!(morphological_clean(&m, 1, true).unwrap(), m);
    }

    #[test]
    fn even_kernel_rejected() {
        let m = CategoryMask::empty(Category::Water, 4, 4);
        assert!(morphological_clean(&m, 2, true).is_err());
        assert!(morphological_clean(&m, 0, true).is_err());
    }

    #[test]
    fn speckle_removed_square_kept() {
        let mut m =
            CategoryMask::from_fn(Category::Water, 40, 40, |x, y| (10..30).contains(&x) && (10..30).contains(&y));
        m.set(3, 35, true);
        let out = morphological_clean(&m, 3, true).unwrap();
        assert!(!out.get(3, 35));
        // Direct set morphology: the square is a union of 3x3 translates, so opening keeps
        // it and closing adds nothing.
        let square =
            CategoryMask::from_fn(Category::Water, 40, 40, |x, y| (10..30).contains(&x) && (10..30).contains(&y));
        assert_eq!(out, square);
    }

    #[test]
    fn small_hole_filled() {
        let mut m = CategoryMask::from_fn(Category::Water, 20, 20, |x, y| (3..17).contains(&x) && (3..17).contains(&y));
        m.set(9, 9, false);
        let out = morphological_clean(&m, 3, true).unwrap();
        assert!(out.get(9, 9));
        assert_eq!(out.count(), 14 * 14);
    }

    #[test]
    fn full_mask_is_closed_under_morphology() {
        let m = CategoryMask::from_fn(Category::Water, 13, 7, |_, _| true);
        assert_eq!(morphological_clean(&m, 5, true).unwrap(), m);
        assert_eq!(morphological_clean(&m, 5, false).unwrap(), m);
    }
}
