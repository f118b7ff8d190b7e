//! Raster primitives shared by the whole pipeline: 8-bit grayscale images,
//! 1-bit ridge maps, block decomposition and file I/O.

mod io;

use std::path::PathBuf;

use thiserror::Error;

pub use io::{load_gray, save_gray};

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("file not found: {0}")]
    MissingFile(PathBuf),
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt image file: {0}")]
    CorruptFile(String),
    #[error("invalid dimensions {width}x{height} for {samples} samples")]
    InvalidDimensions { width: u32, height: u32, samples: usize },
    #[error("block size must be at least 1")]
    InvalidBlockSize,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// 8-bit single-channel raster, row-major. Coordinates grow rightward (x)
/// and downward (y). Immutable once constructed; operations return new
/// images, so values can be shared freely across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 || data.len() != (width as usize) * (height as usize) {
            return Err(RasterError::InvalidDimensions { width, height, samples: data.len() });
        }
        Ok(Self { width, height, data })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut data = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn filled(width: u32, height: u32, value: u8) -> Self {
        Self::from_fn(width, height, |_, _| value)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.data[y as usize * self.width as usize + x as usize]
    }

    /// Sample with the coordinate clamped to the image rectangle
    /// (replicate border padding).
    #[inline]
    pub fn get_clamped(&self, x: i64, y: i64) -> u8 {
        let cx = x.clamp(0, self.width as i64 - 1) as u32;
        let cy = y.clamp(0, self.height as i64 - 1) as u32;
        self.get(cx, cy)
    }

    /// Sample with the coordinate reflected at the borders (mirror padding,
    /// edge pixel repeated), valid for any offset.
    #[inline]
    pub fn get_mirrored(&self, x: i64, y: i64) -> u8 {
        self.get(mirror_index(x, self.width), mirror_index(y, self.height))
    }
}

/// Symmetric reflection of an arbitrary index into `0..n`.
fn mirror_index(i: i64, n: u32) -> u32 {
    let n = n as i64;
    let period = 2 * n;
    let mut m = i.rem_euclid(period);
    if m >= n {
        m = period - 1 - m;
    }
    m as u32
}

/// 1-bit raster with the fixed semantics 0 = ridge, 1 = furrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl BinaryImage {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 || data.len() != (width as usize) * (height as usize) {
            return Err(RasterError::InvalidDimensions { width, height, samples: data.len() });
        }
        debug_assert!(data.iter().all(|&b| b <= 1));
        Ok(Self { width, height, data })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut data = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y) & 1);
            }
        }
        Self { width, height, data }
    }

    /// Build from ASCII art rows where `#` marks a ridge pixel (bit 0) and
    /// anything else is furrow. Handy for fixtures.
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len() as u32;
        let width = rows[0].len() as u32;
        Self::from_fn(width, height, |x, y| {
            let c = rows[y as usize].as_bytes()[x as usize];
            if c == b'#' {
                0
            } else {
                1
            }
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.data[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn is_ridge(&self, x: u32, y: u32) -> bool {
        self.get(x, y) == 0
    }

    /// Render as grayscale: ridge pixels black, furrows white.
    pub fn to_gray(&self) -> GrayImage {
        GrayImage::from_fn(self.width, self.height, |x, y| {
            if self.get(x, y) == 0 {
                0
            } else {
                255
            }
        })
    }
}

/// Square tile of a parent image, addressed by its top-left corner. Edge
/// tiles keep their nominal size; consumers mirror-pad past the border and
/// write back only the in-image region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub x: u32,
    pub y: u32,
    pub size: u32,
}

impl Block {
    /// Width of the in-image part of the block.
    pub fn clipped_width(&self, image_width: u32) -> u32 {
        self.size.min(image_width - self.x)
    }

    /// Height of the in-image part of the block.
    pub fn clipped_height(&self, image_height: u32) -> u32 {
        self.size.min(image_height - self.y)
    }
}

/// Tile an image into `block_size`-sized blocks in row-major order.
/// Count is `ceil(w / s) * ceil(h / s)`; edge blocks overhang the image.
pub fn split_blocks(image: &GrayImage, block_size: u32) -> Result<Vec<Block>, RasterError> {
    if block_size == 0 {
        return Err(RasterError::InvalidBlockSize);
    }
    let mut blocks = Vec::new();
    let mut y = 0;
    while y < image.height() {
        let mut x = 0;
        while x < image.width() {
            blocks.push(Block { x, y, size: block_size });
            x += block_size;
        }
        y += block_size;
    }
    Ok(blocks)
}
