//! Ridge/valley contrast enhancement: global histogram equalization, block
//! FFT enhancement, Sobel gradient fields and locally adaptive binarization.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::raster::{split_blocks, BinaryImage, GrayImage};

/// Default spectral boost exponent. Stronger boosts close gaps along
/// the ridge flow; past a point neighboring ridges bleed together and
/// fake branch points appear.
pub const DEFAULT_FFT_K: f64 = 0.45;
/// Default FFT processing block edge, in pixels.
pub const DEFAULT_FFT_BLOCK: u32 = 32;
/// Default adaptive-threshold block edge, in pixels.
pub const DEFAULT_BINARIZE_BLOCK: u32 = 16;

#[derive(Debug, Error)]
pub enum EnhanceError {
    #[error("image too small: need at least {min}x{min}, got {width}x{height}")]
    ImageTooSmall { width: u32, height: u32, min: u32 },
}

/// Per-pixel signed derivative estimates from the two Sobel kernels.
/// Magnitudes are bounded by 4 * 255 (the kernel weights sum to 4 per sign).
#[derive(Debug, Clone)]
pub struct GradientField {
    width: u32,
    height: u32,
    gx: Vec<i32>,
    gy: Vec<i32>,
}

impl GradientField {
    pub fn new(width: u32, height: u32, gx: Vec<i32>, gy: Vec<i32>) -> Self {
        assert_eq!(gx.len(), width as usize * height as usize);
        assert_eq!(gy.len(), width as usize * height as usize);
        Self { width, height, gx, gy }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn gx(&self, x: u32, y: u32) -> i32 {
        self.gx[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn gy(&self, x: u32, y: u32) -> i32 {
        self.gy[y as usize * self.width as usize + x as usize]
    }
}

/// Round half away from zero for non-negative values; the single float to
/// intensity rounding rule used across the pipeline.
#[inline]
pub(crate) fn round_half_up(x: f64) -> f64 {
    (x + 0.5).floor()
}

/// Remap intensities through the normalized cumulative histogram so the
/// output occupies the full 0..=255 range. The mapping is monotone
/// non-decreasing and the maximum input intensity always maps to 255.
pub fn histogram_equalize(image: &GrayImage) -> GrayImage {
    let mut counts = [0u64; 256];
    for &p in image.data() {
        counts[p as usize] += 1;
    }
    let total = image.data().len() as f64;
    let mut lut = [0u8; 256];
    let mut cumulative = 0u64;
    for v in 0..256 {
        cumulative += counts[v];
        let cdf = cumulative as f64 / total;
        lut[v] = round_half_up(255.0 * cdf).clamp(0.0, 255.0) as u8;
    }
    GrayImage::from_fn(image.width(), image.height(), |x, y| lut[image.get(x, y) as usize])
}

/// Enhance each block by its dominant frequencies: per block, take the 2D
/// DFT, multiply the spectrum by |F|^k, invert, then rescale the block back
/// to its original min/max range.
///
/// Blocks overhanging the image edge are mirror-padded to full size and
/// only the in-image region is written back. Blocks are independent, so the
/// result does not depend on processing order.
pub fn fft_enhance(image: &GrayImage, k: f64, block_size: u32) -> GrayImage {
    assert!(k >= 0.0, "spectral exponent must be non-negative");
    let blocks = split_blocks(image, block_size).expect("block size validated by caller");
    let n = block_size as usize;

    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);

    let mut out = image.data().to_vec();
    let mut buf = vec![Complex::new(0.0, 0.0); n * n];
    let mut transposed = vec![Complex::new(0.0, 0.0); n * n];

    for block in blocks {
        let mut lo = u8::MAX;
        let mut hi = u8::MIN;
        for by in 0..n {
            for bx in 0..n {
                let v = image.get_mirrored(block.x as i64 + bx as i64, block.y as i64 + by as i64);
                lo = lo.min(v);
                hi = hi.max(v);
                buf[by * n + bx] = Complex::new(v as f64, 0.0);
            }
        }

        fft2d(&forward, &mut buf, &mut transposed, n);
        for c in buf.iter_mut() {
            *c *= c.norm().powf(k);
        }
        fft2d(&inverse, &mut buf, &mut transposed, n);
        let scale = 1.0 / (n * n) as f64;

        let mut r_lo = f64::INFINITY;
        let mut r_hi = f64::NEG_INFINITY;
        for c in buf.iter() {
            let r = c.re * scale;
            r_lo = r_lo.min(r);
            r_hi = r_hi.max(r);
        }

        let w = block.clipped_width(image.width()) as usize;
        let h = block.clipped_height(image.height()) as usize;
        let degenerate = (r_hi - r_lo) <= 1e-6 * r_hi.abs().max(1.0);
        let gain = if degenerate { 0.0 } else { (hi - lo) as f64 / (r_hi - r_lo) };
        for by in 0..h {
            let row = (block.y as usize + by) * image.width() as usize + block.x as usize;
            for bx in 0..w {
                let r = buf[by * n + bx].re * scale;
                let v = if degenerate {
                    (lo as f64 + hi as f64) / 2.0
                } else {
                    lo as f64 + (r - r_lo) * gain
                };
                out[row + bx] = round_half_up(v).clamp(0.0, 255.0) as u8;
            }
        }
    }
    GrayImage::new(image.width(), image.height(), out).expect("dimensions unchanged")
}

/// In-place 2D transform of an n x n buffer: rows, transpose, rows,
/// transpose back.
fn fft2d(
    fft: &std::sync::Arc<dyn rustfft::Fft<f64>>,
    buf: &mut [Complex<f64>],
    scratch: &mut [Complex<f64>],
    n: usize,
) {
    fft.process(buf);
    transpose(buf, scratch, n);
    fft.process(scratch);
    transpose(scratch, buf, n);
}

fn transpose(src: &[Complex<f64>], dst: &mut [Complex<f64>], n: usize) {
    for y in 0..n {
        for x in 0..n {
            dst[x * n + y] = src[y * n + x];
        }
    }
}

/// Gradient fields from the two 3x3 Sobel kernels, applied as
/// cross-correlation (no kernel flip) with replicate border padding:
///
/// ```text
///        [ +1  0 -1 ]          [ +1 +2 +1 ]
/// G_x =  [ +2  0 -2 ]   G_y =  [  0  0  0 ]
///        [ +1  0 -1 ]          [ -1 -2 -1 ]
/// ```
///
/// With x growing rightward and y downward, a rising horizontal ramp gives
/// gx = -8 at interior pixels. Downstream consumers use only squares and
/// double angles, which are insensitive to the sign convention.
pub fn sobel_gradients(image: &GrayImage) -> Result<GradientField, EnhanceError> {
    if image.width() < 3 || image.height() < 3 {
        return Err(EnhanceError::ImageTooSmall {
            width: image.width(),
            height: image.height(),
            min: 3,
        });
    }
    const KX: [[i32; 3]; 3] = [[1, 0, -1], [2, 0, -2], [1, 0, -1]];
    const KY: [[i32; 3]; 3] = [[1, 2, 1], [0, 0, 0], [-1, -2, -1]];

    let (w, h) = (image.width(), image.height());
    let mut gx = Vec::with_capacity((w * h) as usize);
    let mut gy = Vec::with_capacity((w * h) as usize);
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let mut sx = 0i32;
            let mut sy = 0i32;
            for dy in -1..=1i64 {
                for dx in -1..=1i64 {
                    let v = image.get_clamped(x + dx, y + dy) as i32;
                    sx += KX[(dy + 1) as usize][(dx + 1) as usize] * v;
                    sy += KY[(dy + 1) as usize][(dx + 1) as usize] * v;
                }
            }
            gx.push(sx);
            gy.push(sy);
        }
    }
    Ok(GradientField::new(w, h, gx, gy))
}

/// Per-pixel gradient magnitude sqrt(gx^2 + gy^2) and quadrant-aware
/// direction atan2(gy, gx); the zero gradient maps to direction 0.
pub fn gradient_magnitude_direction(field: &GradientField) -> (Vec<f64>, Vec<f64>) {
    let len = field.gx.len();
    let mut mag = Vec::with_capacity(len);
    let mut dir = Vec::with_capacity(len);
    for i in 0..len {
        let (gx, gy) = (field.gx[i] as f64, field.gy[i] as f64);
        mag.push(gx.hypot(gy));
        dir.push(if gx == 0.0 && gy == 0.0 { 0.0 } else { gy.atan2(gx) });
    }
    (mag, dir)
}

/// Locally adaptive threshold: a pixel becomes 1 (furrow) iff it is
/// strictly brighter than the mean of its block; means are taken over
/// in-image pixels only.
pub fn binarize_adaptive(image: &GrayImage, block_size: u32) -> BinaryImage {
    let blocks = split_blocks(image, block_size).expect("block size validated by caller");
    let mut out = vec![0u8; image.data().len()];
    for block in blocks {
        let w = block.clipped_width(image.width());
        let h = block.clipped_height(image.height());
        let mut sum = 0u64;
        for by in 0..h {
            for bx in 0..w {
                sum += image.get(block.x + bx, block.y + by) as u64;
            }
        }
        let mean = sum as f64 / (w as u64 * h as u64) as f64;
        for by in 0..h {
            for bx in 0..w {
                let (x, y) = (block.x + bx, block.y + by);
                if (image.get(x, y) as f64) > mean {
                    out[y as usize * image.width() as usize + x as usize] = 1;
                }
            }
        }
    }
    BinaryImage::new(image.width(), image.height(), out).expect("dimensions unchanged")
}
