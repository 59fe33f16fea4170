//! Plan image loading and preprocessing: L0 gradient smoothing and edge enhancement.

use std::path::Path;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};

/// RGB layout plan with its ground scale in meters per pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterPlan {
    width: u32,
    height: u32,
    pixels: Vec<[u8; 3]>,
    scale: f64,
}

impl RasterPlan {
    pub fn new(width: u32, height: u32, pixels: Vec<[u8; 3]>, scale: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Validation(format!("plan has zero dimension {width}x{height}")));
        }
        if pixels.len() != width as usize * height as usize {
            return Err(Error::Validation(format!("pixel count {} does not match {width}x{height}", pixels.len())));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Validation(format!("scale must be positive, got {scale}")));
        }
        Ok(RasterPlan { width, height, pixels, scale })
    }

    /// A plan filled with a single color.
    pub fn filled(width: u32, height: u32, color: [u8; 3], scale: f64) -> Result<Self> {
        RasterPlan::new(width, height, vec![color; width as usize * height as usize], scale)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, c: [u8; 3]) {
        let w = self.width as usize;
        self.pixels[y as usize * w + x as usize] = c;
    }

    fn with_pixels(&self, pixels: Vec<[u8; 3]>) -> RasterPlan {
        RasterPlan { pixels, ..*self }
    }

    pub fn to_png_bytes(&self) -> Result<Vec<u8>> {
        let raw: Vec<u8> = self.pixels.iter().flatten().copied().collect();
        let img = image::RgbImage::from_raw(self.width, self.height, raw)
            .ok_or_else(|| Error::Invariant("pixel buffer size mismatch".into()))?;
        let mut out = std::io::Cursor::new(Vec::new());
        img.write_to(&mut out, image::ImageFormat::Png)?;
        Ok(out.into_inner())
    }

    pub fn save_png(&self, path: &Path) -> Result<()> {
        let bytes = self.to_png_bytes()?;
        std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }
}

/// Decodes a PNG plan as 8-bit RGB, discarding alpha.
pub fn load_plan(path: &Path, scale: f64) -> Result<RasterPlan> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.is_empty() {
        return Err(Error::io(path, std::io::Error::new(std::io::ErrorKind::UnexpectedEof, "file is empty")));
    }
    decode_plan(&bytes, scale)
}

pub fn decode_plan(bytes: &[u8], scale: f64) -> Result<RasterPlan> {
    let img = image::load_from_memory(bytes)?.to_rgb8();
    let (w, h) = img.dimensions();
    let pixels = img.pixels().map(|p| p.0).collect();
    RasterPlan::new(w, h, pixels, scale)
}

/// Parameters of the half-quadratic L0 solver.
#[derive(Debug, Clone, Copy)]
pub struct L0Params {
    pub lambda: f64,
    pub kappa: f64,
    pub beta_max: f64,
}

impl Default for L0Params {
    fn default() -> Self {
        L0Params { lambda: 0.02, kappa: 2.0, beta_max: 1e5 }
    }
}

/// L0 gradient-minimizing smoothing with default solver constants.
pub fn smooth(plan: &RasterPlan, lambda: f64) -> Result<RasterPlan> {
    smooth_with(plan, L0Params { lambda, ..L0Params::default() })
}

/// Minimizes `|S - I|^2 + lambda * #{p : grad S(p) != 0}` by alternating between
/// auxiliary gradient variables and a screened Poisson solve in the Fourier domain.
/// Image intensities are normalized to `[0, 1]`; boundaries are periodic.
pub fn smooth_with(plan: &RasterPlan, params: L0Params) -> Result<RasterPlan> {
    let L0Params { lambda, kappa, beta_max } = params;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Validation(format!("lambda must be >= 0, got {lambda}")));
    }
    if lambda == 0.0 {
        return Ok(plan.clone());
    }
    if kappa <= 1.0 || beta_max <= 0.0 {
        return Err(Error::Validation("kappa must exceed 1 and beta_max must be positive".into()));
    }

    let w = plan.width as usize;
    let h = plan.height as usize;
    let n = w * h;
    let fft = Fft2::new(w, h);

    let input: Vec<Vec<f64>> = (0..3).map(|c| plan.pixels.iter().map(|p| p[c] as f64 / 255.0).collect()).collect();
    let input_hat: Vec<Vec<Complex<f64>>> = input
        .iter()
        .map(|ch| {
            let mut buf: Vec<Complex<f64>> = ch.iter().map(|&v| Complex::new(v, 0.0)).collect();
            fft.forward(&mut buf);
            buf
        })
        .collect();

    // |F(dx)|^2 + |F(dy)|^2 for circular forward differences.
    let mut grad_otf = vec![0.0; n];
    for v in 0..h {
        let cy = 2.0 - 2.0 * (2.0 * std::f64::consts::PI * v as f64 / h as f64).cos();
        for u in 0..w {
            let cx = 2.0 - 2.0 * (2.0 * std::f64::consts::PI * u as f64 / w as f64).cos();
            grad_otf[v * w + u] = cx + cy;
        }
    }

    let mut s = input.clone();
    let mut gx = vec![vec![0.0; n]; 3];
    let mut gy = vec![vec![0.0; n]; 3];
    let mut beta = 2.0 * lambda;
    while beta < beta_max {
        for c in 0..3 {
            for y in 0..h {
                for x in 0..w {
                    let i = y * w + x;
                    gx[c][i] = s[c][y * w + (x + 1) % w] - s[c][i];
                    gy[c][i] = s[c][((y + 1) % h) * w + x] - s[c][i];
                }
            }
        }
        let threshold = lambda / beta;
        for i in 0..n {
            let energy: f64 = (0..3).map(|c| gx[c][i] * gx[c][i] + gy[c][i] * gy[c][i]).sum();
            if energy < threshold {
                for c in 0..3 {
                    gx[c][i] = 0.0;
                    gy[c][i] = 0.0;
                }
            }
        }
        for c in 0..3 {
            // Adjoint of the forward difference: d^T g (p) = g(p - 1) - g(p).
            let mut buf: Vec<Complex<f64>> = Vec::with_capacity(n);
            for y in 0..h {
                for x in 0..w {
                    let i = y * w + x;
                    let div = gx[c][y * w + (x + w - 1) % w] - gx[c][i] + gy[c][((y + h - 1) % h) * w + x] - gy[c][i];
                    buf.push(Complex::new(div, 0.0));
                }
            }
            fft.forward(&mut buf);
            for i in 0..n {
                buf[i] = (input_hat[c][i] + buf[i] * beta) / (1.0 + beta * grad_otf[i]);
            }
            fft.inverse(&mut buf);
            for i in 0..n {
                s[c][i] = buf[i].re;
            }
        }
        beta *= kappa;
    }

    let pixels = (0..n)
        .map(|i| {
            let mut px = [0u8; 3];
            for c in 0..3 {
                px[c] = (s[c][i] * 255.0).round().clamp(0.0, 255.0) as u8;
            }
            px
        })
        .collect();
    Ok(plan.with_pixels(pixels))
}

/// Standard deviation of the blur used by unsharp masking.
pub const SHARPEN_SIGMA: f64 = 1.0;

/// Unsharp masking followed by a linear contrast stretch about mid-gray (128).
pub fn enhance(plan: &RasterPlan, sharpen_amount: f64, contrast_gain: f64) -> Result<RasterPlan> {
    if !(sharpen_amount >= 0.0 && sharpen_amount.is_finite()) {
        return Err(Error::Validation(format!("sharpen_amount must be >= 0, got {sharpen_amount}")));
    }
    if !(contrast_gain > 0.0 && contrast_gain.is_finite()) {
        return Err(Error::Validation(format!("contrast_gain must be > 0, got {contrast_gain}")));
    }
    let w = plan.width as usize;
    let h = plan.height as usize;
    let mut out = plan.pixels.clone();
    for c in 0..3 {
        let chan: Vec<f64> = plan.pixels.iter().map(|p| p[c] as f64).collect();
        let blurred = if sharpen_amount > 0.0 { gaussian_blur(&chan, w, h, SHARPEN_SIGMA) } else { chan.clone() };
        for (i, px) in out.iter_mut().enumerate() {
            let v = chan[i];
            let sharp = v + sharpen_amount * (v - blurred[i]);
            let stretched = 128.0 + contrast_gain * (sharp - 128.0);
            px[c] = stretched.round().clamp(0.0, 255.0) as u8;
        }
    }
    Ok(plan.with_pixels(out))
}

pub(crate) fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil().max(1.0) as isize;
    let mut k: Vec<f64> = (-radius..=radius).map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp()).collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// Separable Gaussian blur with clamp-to-edge borders. `sigma <= 0` copies the input.
pub(crate) fn gaussian_blur(data: &[f64], w: usize, h: usize, sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return data.to_vec();
    }
    let k = gaussian_kernel(sigma);
    let r = (k.len() / 2) as isize;
    let mut tmp = vec![0.0; data.len()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (j, kv) in k.iter().enumerate() {
                let xx = (x as isize + j as isize - r).clamp(0, w as isize - 1) as usize;
                acc += kv * data[y * w + xx];
            }
            tmp[y * w + x] = acc;
        }
    }
    let mut out = vec![0.0; data.len()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (j, kv) in k.iter().enumerate() {
                let yy = (y as isize + j as isize - r).clamp(0, h as isize - 1) as usize;
                acc += kv * tmp[yy * w + x];
            }
            out[y * w + x] = acc;
        }
    }
    out
}

/// Row/column 2D FFT over a row-major buffer.
struct Fft2 {
    w: usize,
    h: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    fn new(w: usize, h: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft2 {
            w,
            h,
            row_fwd: planner.plan_fft_forward(w),
            row_inv: planner.plan_fft_inverse(w),
            col_fwd: planner.plan_fft_forward(h),
            col_inv: planner.plan_fft_inverse(h),
        }
    }

    fn forward(&self, buf: &mut [Complex<f64>]) {
        self.apply(buf, &self.row_fwd, &self.col_fwd);
    }

    fn inverse(&self, buf: &mut [Complex<f64>]) {
        self.apply(buf, &self.row_inv, &self.col_inv);
        let norm = 1.0 / (self.w * self.h) as f64;
        buf.iter_mut().for_each(|v| *v *= norm);
    }

    fn apply(&self, buf: &mut [Complex<f64>], rows: &Arc<dyn Fft<f64>>, cols: &Arc<dyn Fft<f64>>) {
        rows.process(buf);
        let mut col = vec![Complex::new(0.0, 0.0); self.h];
        for x in 0..self.w {
            for y in 0..self.h {
                col[y] = buf[y * self.w + x];
            }
            cols.process(&mut col);
            for y in 0..self.h {
                buf[y * self.w + x] = col[y];
            }
        }
    }
}
