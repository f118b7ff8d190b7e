//! Skeleton extraction and minutiae detection: thinning, skeleton cleanup,
//! ridge labeling, minutiae marking, false-minutiae removal, orientation
//! estimation and ridge sampling, plus the persisted template format.

mod clean;
mod mark;
mod orient;
mod remove;
pub mod template;
mod thin;

use thiserror::Error;

pub use clean::clean_skeleton;
pub use mark::mark_minutiae;
pub use orient::{
    minutia_orientation, orient_minutiae, sample_ridge, sample_ridge_for, OrientedMinutia,
};
pub use remove::{inter_ridge_distance, remove_false_minutiae, FalseRemoval, FalseRule};
pub use template::{MinutiaeTemplate, TemplateError, TemplateMinutia};
pub use thin::thin;

/// Hard cap on sampled ridge points per minutia.
pub const MAX_RIDGE_SAMPLES: usize = 10;

#[derive(Debug, Error)]
pub enum MinutiaeError {
    #[error("skeleton is not unit-width (2x2 ridge square at {x},{y})")]
    NotThinned { x: u32, y: u32 },
    #[error("skeleton has no ridge pixels")]
    EmptySkeleton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinutiaKind {
    Termination,
    Bifurcation,
}

impl MinutiaKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MinutiaKind::Termination => "termination",
            MinutiaKind::Bifurcation => "bifurcation",
        }
    }
}

/// A ridge feature point: position, orientation, kind and the id of the
/// ridge component it sits on.
#[derive(Debug, Clone, PartialEq)]
pub struct Minutia {
    pub x: u32,
    pub y: u32,
    pub theta: f64,
    pub kind: MinutiaKind,
    pub ridge_id: u32,
}

impl Minutia {
    pub fn distance(&self, other: &Minutia) -> f64 {
        let dx = self.x as f64 - other.x as f64;
        let dy = self.y as f64 - other.y as f64;
        dx.hypot(dy)
    }
}

/// Offsets of the 8 neighbors in the order east, north-east, north,
/// north-west, west, south-west, south, south-east. The thinning conditions
/// index into exactly this cycle.
pub(crate) const NEIGHBORS_8: [(i64, i64); 8] =
    [(1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1)];

/// Unit-width thinned ridge map. Bit 1 marks a ridge pixel (note this is
/// inverted from `BinaryImage`, where ridges are 0). `labels` carries the
/// 8-connected component id per pixel once `label_ridges` has run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    width: u32,
    height: u32,
    bits: Vec<u8>,
    labels: Vec<u32>,
    num_labels: u32,
}

impl Skeleton {
    pub(crate) fn from_bits(width: u32, height: u32, bits: Vec<u8>) -> Self {
        assert_eq!(bits.len(), width as usize * height as usize);
        let labels = vec![0; bits.len()];
        Self { width, height, bits, labels, num_labels: 0 }
    }

    /// Build from ASCII art rows where `#` marks a ridge pixel.
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len() as u32;
        let width = rows[0].len() as u32;
        let mut bits = Vec::with_capacity((width * height) as usize);
        for row in rows {
            assert_eq!(row.len() as u32, width, "ragged ascii fixture");
            for c in row.bytes() {
                bits.push(u8::from(c == b'#'));
            }
        }
        Self::from_bits(width, height, bits)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn is_set(&self, x: u32, y: u32) -> bool {
        self.bits[y as usize * self.width as usize + x as usize] == 1
    }

    #[inline]
    pub(crate) fn is_set_i64(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && x < self.width as i64
            && y < self.height as i64
            && self.is_set(x as u32, y as u32)
    }

    pub(crate) fn clear(&mut self, x: u32, y: u32) {
        let idx = y as usize * self.width as usize + x as usize;
        self.bits[idx] = 0;
        self.labels[idx] = 0;
    }

    /// Set a ridge bit. Labels are not maintained; callers re-run
    /// `label_ridges` afterwards.
    pub(crate) fn set(&mut self, x: u32, y: u32) {
        self.bits[y as usize * self.width as usize + x as usize] = 1;
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn label(&self, x: u32, y: u32) -> u32 {
        self.labels[y as usize * self.width as usize + x as usize]
    }

    /// Number of distinct ridge components assigned by `label_ridges`.
    pub fn num_labels(&self) -> u32 {
        self.num_labels
    }

    pub fn count_set(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Set pixels in raster order.
    pub fn set_pixels(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(move |(i, _)| ((i as u32) % w, (i as u32) / w))
    }

    /// Set 8-neighbors of a pixel, in the fixed neighbor order.
    pub fn set_neighbors(&self, x: u32, y: u32) -> Vec<(u32, u32)> {
        NEIGHBORS_8
            .iter()
            .filter_map(|&(dx, dy)| {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if self.is_set_i64(nx, ny) {
                    Some((nx as u32, ny as u32))
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn neighbor_count(&self, x: u32, y: u32) -> usize {
        NEIGHBORS_8
            .iter()
            .filter(|&&(dx, dy)| self.is_set_i64(x as i64 + dx, y as i64 + dy))
            .count()
    }

    /// First all-ridge 2x2 square, if any; `None` means the skeleton is
    /// unit-width.
    pub fn unit_width_violation(&self) -> Option<(u32, u32)> {
        for y in 0..self.height.saturating_sub(1) {
            for x in 0..self.width.saturating_sub(1) {
                if self.is_set(x, y)
                    && self.is_set(x + 1, y)
                    && self.is_set(x, y + 1)
                    && self.is_set(x + 1, y + 1)
                {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Number of 8-connected ridge components.
    pub fn component_count(&self) -> u32 {
        count_components(&self.bits, self.width, self.height)
    }

    /// Render as grayscale: ridge pixels black on white.
    pub fn to_gray(&self) -> crate::raster::GrayImage {
        crate::raster::GrayImage::from_fn(self.width, self.height, |x, y| {
            if self.is_set(x, y) {
                0
            } else {
                255
            }
        })
    }
}

/// Assign dense component ids 1..=K to the 8-connected ridge components,
/// numbered in raster order of first encounter.
pub fn label_ridges(skel: &Skeleton) -> Skeleton {
    let mut out = skel.clone();
    let w = out.width as usize;
    out.labels.iter_mut().for_each(|l| *l = 0);
    let mut next = 0u32;
    let mut queue = Vec::new();
    for y in 0..out.height {
        for x in 0..out.width {
            if !out.is_set(x, y) || out.labels[y as usize * w + x as usize] != 0 {
                continue;
            }
            next += 1;
            queue.push((x, y));
            out.labels[y as usize * w + x as usize] = next;
            while let Some((cx, cy)) = queue.pop() {
                for &(dx, dy) in &NEIGHBORS_8 {
                    let (nx, ny) = (cx as i64 + dx, cy as i64 + dy);
                    if out.is_set_i64(nx, ny) {
                        let idx = ny as usize * w + nx as usize;
                        if out.labels[idx] == 0 {
                            out.labels[idx] = next;
                            queue.push((nx as u32, ny as u32));
                        }
                    }
                }
            }
        }
    }
    out.num_labels = next;
    out
}

pub(crate) fn count_components(bits: &[u8], width: u32, height: u32) -> u32 {
    let w = width as usize;
    let mut seen = vec![false; bits.len()];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..bits.len() {
        if bits[start] == 0 || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let (x, y) = ((idx % w) as i64, (idx / w) as i64);
            for &(dx, dy) in &NEIGHBORS_8 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= width as i64 || ny >= height as i64 {
                    continue;
                }
                let nidx = ny as usize * w + nx as usize;
                if bits[nidx] == 1 && !seen[nidx] {
                    seen[nidx] = true;
                    stack.push(nidx);
                }
            }
        }
    }
    count
}
