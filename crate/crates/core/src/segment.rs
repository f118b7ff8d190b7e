//! Foreground/background segmentation: least-squares block ridge direction,
//! gradient-coherence certainty, and ROI cleanup with morphological
//! OPEN / CLOSE.

use std::f64::consts::PI;

use crate::enhance::GradientField;

/// Per-block orientation and certainty over a gradient field. `foreground`
/// holds exactly the blocks whose certainty reaches the threshold.
#[derive(Debug, Clone)]
pub struct DirectionMap {
    pub blocks_x: u32,
    pub blocks_y: u32,
    pub block_size: u32,
    pub width: u32,
    pub height: u32,
    /// Ridge orientation per block, folded into [0, pi).
    pub angle: Vec<f64>,
    /// Certainty level E per block, >= 0.
    pub certainty: Vec<f64>,
    pub foreground: Vec<bool>,
    pub threshold: f64,
}

/// Per-pixel region-of-interest mask (1 = inside the ROI).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoiMask {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl RoiMask {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), width as usize * height as usize);
        Self { width, height, data }
    }

    pub fn filled(width: u32, height: u32, value: u8) -> Self {
        Self::new(width, height, vec![value & 1; width as usize * height as usize])
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
    pub fn contains(&self, x: u32, y: u32) -> bool {
        self.data[y as usize * self.width as usize + x as usize] == 1
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b == 1).count()
    }
}

fn block_counts(field: &GradientField, w: u32) -> (u32, u32) {
    (field.width().div_ceil(w), field.height().div_ceil(w))
}

/// Sums needed by both the direction and certainty estimators:
/// (sum 2*gx*gy, sum gx^2 - gy^2, sum gx^2 + gy^2) over in-image block pixels.
fn block_sums(field: &GradientField, bx: u32, by: u32, w: u32) -> (f64, f64, f64) {
    let x1 = (bx * w + w).min(field.width());
    let y1 = (by * w + w).min(field.height());
    let (mut cross, mut diff, mut energy) = (0.0f64, 0.0f64, 0.0f64);
    for y in by * w..y1 {
        for x in bx * w..x1 {
            let gx = field.gx(x, y) as f64;
            let gy = field.gy(x, y) as f64;
            cross += 2.0 * gx * gy;
            diff += gx * gx - gy * gy;
            energy += gx * gx + gy * gy;
        }
    }
    (cross, diff, energy)
}

/// Least-squares block direction via the double-angle estimator
/// beta = 1/2 * atan2(sum 2*gx*gy, sum gx^2 - gy^2), folded into [0, pi).
/// Negating every gradient in a block leaves beta unchanged.
pub fn block_direction(field: &GradientField, w: u32) -> Vec<f64> {
    assert!(w >= 2, "block size must be at least 2");
    let (bxs, bys) = block_counts(field, w);
    let mut out = Vec::with_capacity((bxs * bys) as usize);
    for by in 0..bys {
        for bx in 0..bxs {
            let (cross, diff, _) = block_sums(field, bx, by, w);
            let mut beta = 0.5 * cross.atan2(diff);
            if beta < 0.0 {
                beta += PI;
            }
            out.push(beta);
        }
    }
    out
}

/// Gradient-coherence certainty level per block:
/// E = sqrt((sum gx^2-gy^2)^2 + (sum 2*gx*gy)^2) / (W * W * sum gx^2+gy^2),
/// defined as 0 when the block has no gradient energy. Scale-invariant in
/// the gradients; a perfectly coherent block scores 1 / W^2.
pub fn block_certainty(field: &GradientField, w: u32) -> Vec<f64> {
    assert!(w >= 2, "block size must be at least 2");
    let (bxs, bys) = block_counts(field, w);
    let mut out = Vec::with_capacity((bxs * bys) as usize);
    for by in 0..bys {
        for bx in 0..bxs {
            let (cross, diff, energy) = block_sums(field, bx, by, w);
            let e = if energy == 0.0 {
                0.0
            } else {
                diff.hypot(cross) / ((w * w) as f64 * energy)
            };
            out.push(e);
        }
    }
    out
}

/// Combine direction and certainty into a block map; blocks at or above
/// `threshold` are foreground.
pub fn direction_map(field: &GradientField, w: u32, threshold: f64) -> DirectionMap {
    let (blocks_x, blocks_y) = block_counts(field, w);
    let angle = block_direction(field, w);
    let certainty = block_certainty(field, w);
    let foreground = certainty.iter().map(|&e| e >= threshold).collect();
    DirectionMap {
        blocks_x,
        blocks_y,
        block_size: w,
        width: field.width(),
        height: field.height(),
        angle,
        certainty,
        foreground,
    threshold,
    }
}

/// Rasterize the foreground blocks to a pixel mask, then apply OPEN (erode,
/// dilate) to drop isolated specks and CLOSE (dilate, erode) to fill small
/// cavities. The structuring element is a square of side 2*radius + 1.
pub fn roi_extract(map: &DirectionMap, structuring_radius: u32) -> RoiMask {
    let mut data = vec![0u8; map.width as usize * map.height as usize];
    for by in 0..map.blocks_y {
        for bx in 0..map.blocks_x {
            if !map.foreground[(by * map.blocks_x + bx) as usize] {
                continue;
            }
            let x1 = (bx * map.block_size + map.block_size).min(map.width);
            let y1 = (by * map.block_size + map.block_size).min(map.height);
            for y in by * map.block_size..y1 {
                for x in bx * map.block_size..x1 {
                    data[y as usize * map.width as usize + x as usize] = 1;
                }
            }
        }
    }
    let mask = RoiMask::new(map.width, map.height, data);
    close(&open(&mask, structuring_radius), structuring_radius)
}

/// Erosion with a square structuring element; cells outside the image are
/// ignored rather than treated as background, so a full-foreground mask is
/// a fixed point.
pub fn erode(mask: &RoiMask, radius: u32) -> RoiMask {
    separable_extreme(mask, radius, 0)
}

/// Dilation with a square structuring element.
pub fn dilate(mask: &RoiMask, radius: u32) -> RoiMask {
    separable_extreme(mask, radius, 1)
}

pub fn open(mask: &RoiMask, radius: u32) -> RoiMask {
    dilate(&erode(mask, radius), radius)
}

pub fn close(mask: &RoiMask, radius: u32) -> RoiMask {
    erode(&dilate(mask, radius), radius)
}

/// Square structuring elements are separable: run a 1D min/max window along
/// rows, then along columns. `target` = 0 computes min (erode), 1 max (dilate).
fn separable_extreme(mask: &RoiMask, radius: u32, target: u8) -> RoiMask {
    let (w, h) = (mask.width as i64, mask.height as i64);
    let r = radius as i64;
    let pass = |src: &[u8], horizontal: bool| -> Vec<u8> {
        let mut dst = vec![0u8; src.len()];
        for y in 0..h {
            for x in 0..w {
                let mut val = 1 - target;
                for d in -r..=r {
                    let (sx, sy) = if horizontal { (x + d, y) } else { (x, y + d) };
                    if sx < 0 || sy < 0 || sx >= w || sy >= h {
                        continue;
                    }
                    if src[(sy * w + sx) as usize] == target {
                        val = target;
                        break;
                    }
                }
                dst[(y * w + x) as usize] = val;
            }
        }
        dst
    };
    let rows = pass(&mask.data, true);
    let cols = pass(&rows, false);
    RoiMask::new(mask.width, mask.height, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enhance::GradientField;

    fn uniform_field(w: u32, h: u32, gx: i32, gy: i32) -> GradientField {
        GradientField::new(w, h, vec![gx; (w * h) as usize], vec![gy; (w * h) as usize])
    }

    #[test]
    fn direction_pure_horizontal_gradient() {
        let f = uniform_field(16, 16, 1, 0);
        let beta = block_direction(&f, 16);
        assert_eq!(beta.len(), 1);
        assert!(beta[0].abs() < 1e-12);
    }

    #[test]
    fn direction_diagonal_gradient() {
        let f = uniform_field(16, 16, 1, 1);
        let beta = block_direction(&f, 16);
        assert!((beta[0] - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn direction_invariant_under_gradient_negation() {
        let f = GradientField::new(
            8,
            8,
            (0..64).map(|i| i * 13 % 17 - 8).collect(),
            (0..64).map(|i| i * 7 % 19 - 9).collect(),
        );
        let g = GradientField::new(
            8,
            8,
            (0..64).map(|i| -(i * 13 % 17 - 8)).collect(),
            (0..64).map(|i| -(i * 7 % 19 - 9)).collect(),
        );
        let a = block_direction(&f, 8);
        let b = block_direction(&g, 8);
        assert!((a[0] - b[0]).abs() < 1e-12);
    }

    #[test]
    fn certainty_zero_for_flat_block() {
        let f = uniform_field(16, 16, 0, 0);
        assert_eq!(block_certainty(&f, 16), vec![0.0]);
    }

    #[test]
    fn certainty_coherent_block_is_inverse_w_squared() {
        for w in [4u32, 8, 16] {
            let f = uniform_field(w, w, 5, 0);
            let e = block_certainty(&f, w);
            assert!((e[0] - 1.0 / (w * w) as f64).abs() < 1e-12, "W={w}");
        }
    }

    #[test]
    fn certainty_isotropic_block_is_zero() {
        // Half the pixels (g, 0), half (0, g): both sums cancel.
        let g = 3;
        let f = GradientField::new(
            16,
            16,
            (0..256).map(|i| if i % 2 == 0 { g } else { 0 }).collect(),
            (0..256).map(|i| if i % 2 == 0 { 0 } else { g }).collect(),
        );
        let e = block_certainty(&f, 16);
        assert!(e[0].abs() < 1e-12);
    }

    #[test]
    fn certainty_scale_invariant() {
        let gx: Vec<i32> = (0..64).map(|i| i * 29 % 23 - 11).collect();
        let gy: Vec<i32> = (0..64).map(|i| i * 31 % 27 - 13).collect();
        let base = block_certainty(&GradientField::new(8, 8, gx.clone(), gy.clone()), 8)[0];
        for c in [2, 10] {
            let scaled = block_certainty(
                &GradientField::new(
                    8,
                    8,
                    gx.iter().map(|&v| v * c).collect(),
                    gy.iter().map(|&v| v * c).collect(),
                ),
                8,
            )[0];
            assert!((base - scaled).abs() < 1e-12, "c={c}");
        }
    }

    #[test]
    fn all_foreground_mask_is_morphology_fixed_point() {
        let mask = RoiMask::filled(48, 48, 1);
        let opened = open(&mask, 8);
        assert_eq!(opened, mask);
        let closed = close(&opened, 8);
        assert_eq!(closed, mask);
    }

    #[test]
    fn open_removes_isolated_speck() {
        let mut data = vec![0u8; 48 * 48];
        // One 4x4 speck, structuring element 9x9 (radius 4) is larger.
        for y in 20..24 {
            for x in 20..24 {
                data[y * 48 + x] = 1;
            }
        }
        let mask = RoiMask::new(48, 48, data);
        let result = open(&mask, 4);
        assert_eq!(result.count(), 0);
    }

    #[test]
    fn close_fills_small_hole() {
        let mut data = vec![1u8; 48 * 48];
        for y in 20..23 {
            for x in 20..23 {
                data[y * 48 + x] = 0;
            }
        }
        let mask = RoiMask::new(48, 48, data);
        let result = close(&mask, 4);
        assert_eq!(result.count(), 48 * 48);
    }

    #[test]
    fn open_close_idempotent() {
        // Pseudo-random mask; OPEN twice equals OPEN once, same for CLOSE.
        let data: Vec<u8> =
            (0..64u64 * 64).map(|i| (i.wrapping_mul(2654435761) >> 13) as u8 & 1).collect();
        let mask = RoiMask::new(64, 64, data);
        for r in [1u32, 3] {
            let o1 = open(&mask, r);
            assert_eq!(open(&o1, r), o1, "open r={r}");
            let c1 = close(&mask, r);
            assert_eq!(close(&c1, r), c1, "close r={r}");
        }
    }

    #[test]
    fn roi_bounded_by_dilation_of_foreground() {
        let field = GradientField::new(
            64,
            64,
            (0..64 * 64)
                .map(|i: u32| if (i / 64) < 32 { ((i * 7) % 13) as i32 - 6 } else { 0 })
                .collect(),
            (0..64 * 64).map(|i: u32| if (i / 64) < 32 { 3 } else { 0 }).collect(),
        );
        let map = direction_map(&field, 16, 1e-9);
        let roi = roi_extract(&map, 16);
        // Rasterize raw flags, dilate, and check containment.
        let mut raw = vec![0u8; 64 * 64];
        for by in 0..map.blocks_y {
            for bx in 0..map.blocks_x {
                if map.foreground[(by * map.blocks_x + bx) as usize] {
                    for y in by * 16..(by * 16 + 16).min(64) {
                        for x in bx * 16..(bx * 16 + 16).min(64) {
                            raw[(y * 64 + x) as usize] = 1;
                        }
                    }
                }
            }
        }
        let bound = dilate(&RoiMask::new(64, 64, raw), 16);
        for y in 0..64 {
            for x in 0..64 {
                if roi.contains(x, y) {
                    assert!(bound.contains(x, y), "roi outside dilation at {x},{y}");
                }
            }
        }
    }

    #[test]
    fn synthetic_ridge_orientation_recovered() {
        use crate::enhance::sobel_gradients;
        use crate::raster::GrayImage;
        // Plane wave whose gradient orientation is 30 degrees.
        let alpha = 30f64.to_radians();
        let img = GrayImage::from_fn(64, 64, |x, y| {
            let phase = 2.0 * PI * (x as f64 * alpha.cos() + y as f64 * alpha.sin()) / 8.0;
            (128.0 + 100.0 * phase.cos()).round().clamp(0.0, 255.0) as u8
        });
        let field = sobel_gradients(&img).unwrap();
        let beta = block_direction(&field, 16);
        // Interior blocks only; border blocks see replicate-padding bias.
        for by in 1..3u32 {
            for bx in 1..3u32 {
                let b = beta[(by * 4 + bx) as usize];
                let diff = (b - alpha).abs().min(PI - (b - alpha).abs());
                assert!(diff.to_degrees() < 3.0, "block {bx},{by}: {}", b.to_degrees());
            }
        }
    }
}
