//! Synthetic ridge patterns with hand-placed features, used as demo inputs
//! and test fixtures. Cosine stripes play the ridge/valley structure; cuts
//! end a ridge (one termination each) and bridges join two neighboring
//! ridges (one bifurcation at each end).

use crate::raster::GrayImage;

const RIDGE_LOW: f64 = 28.0;
const RIDGE_HIGH: f64 = 228.0;
/// Rows over which a cut fades the ridge out. A hard edge would let the
/// block-FFT enhancement hallucinate ridge fragments past the cut.
const CUT_TAPER: u32 = 12;

/// A ridge cut: ridge `ridge` stops at coordinate `at` along the ridge
/// direction. With `keep_after`, the part after `at` survives (the stretch
/// before is erased); otherwise the part before survives.
#[derive(Debug, Clone, Copy)]
pub struct Cut {
    pub ridge: u32,
    pub at: u32,
    pub keep_after: bool,
}

/// A diagonal connector from ridge `ridge` at coordinate `from` to ridge
/// `ridge + 1` at coordinate `to`.
#[derive(Debug, Clone, Copy)]
pub struct Bridge {
    pub ridge: u32,
    pub from: u32,
    pub to: u32,
}

/// Builder for a stripe fingerprint fixture.
#[derive(Debug, Clone)]
pub struct StripeFixture {
    width: u32,
    height: u32,
    period: u32,
    vertical: bool,
    cuts: Vec<Cut>,
    bridges: Vec<Bridge>,
}

impl StripeFixture {
    /// Vertical ridges (dark stripes run top to bottom).
    pub fn vertical(width: u32, height: u32, period: u32) -> Self {
        assert!(period >= 4, "stripes need a few pixels of period");
        Self { width, height, period, vertical: true, cuts: vec![], bridges: vec![] }
    }

    /// Horizontal ridges.
    pub fn horizontal(width: u32, height: u32, period: u32) -> Self {
        assert!(period >= 4);
        Self { width, height, period, vertical: false, cuts: vec![], bridges: vec![] }
    }

    pub fn with_cut(mut self, ridge: u32, at: u32, keep_after: bool) -> Self {
        self.cuts.push(Cut { ridge, at, keep_after });
        self
    }

    pub fn with_bridge(mut self, ridge: u32, from: u32, to: u32) -> Self {
        self.bridges.push(Bridge { ridge, from, to });
        self
    }

    /// Cross-axis coordinate of a ridge centerline. Ridge troughs sit on
    /// period multiples, so furrow peaks fall on half-period offsets.
    pub fn centerline(&self, ridge: u32) -> u32 {
        ridge * self.period
    }

    /// Designed termination positions, in image coordinates. The ridge
    /// fades over the cut taper, so the visible ending sits about half a
    /// taper inside the kept part.
    pub fn designed_terminations(&self) -> Vec<(u32, u32)> {
        self.cuts
            .iter()
            .map(|c| {
                let along = if c.keep_after {
                    c.at + CUT_TAPER / 2
                } else {
                    c.at.saturating_sub(CUT_TAPER / 2)
                };
                self.to_image(self.centerline(c.ridge), along)
            })
            .collect()
    }

    /// Designed bifurcation positions: the points where a bridge separates
    /// from its end ridges (the drawn diagonal starts just outside each
    /// ridge trough, so the junctions sit near the bridge ends).
    pub fn designed_bifurcations(&self) -> Vec<(u32, u32)> {
        let inset = self.bridge_inset();
        self.bridges
            .iter()
            .flat_map(|b| {
                let start = (self.centerline(b.ridge) as f64 + inset).round() as u32;
                let end = (self.centerline(b.ridge + 1) as f64 - inset).round() as u32;
                [self.to_image(start, b.from), self.to_image(end, b.to)]
            })
            .collect()
    }

    /// Horizontal inset of the drawn bridge diagonal from the ridge
    /// centerlines: just short of the binarized trough half-width, so the
    /// bridge band still overlaps the ridge it joins.
    fn bridge_inset(&self) -> f64 {
        self.period as f64 / 4.0 - 1.5
    }

    /// Map (cross, along) stripe coordinates to image (x, y).
    fn to_image(&self, cross: u32, along: u32) -> (u32, u32) {
        if self.vertical {
            (cross, along)
        } else {
            (along, cross)
        }
    }

    pub fn render(&self) -> GrayImage {
        let (cross_len, along_len) = if self.vertical {
            (self.width, self.height)
        } else {
            (self.height, self.width)
        };
        let p = self.period as f64;
        let half = self.period / 2;

        // Stripe profile: bright furrows, dark ridge troughs at centerlines.
        let mut grid = vec![0.0f64; (cross_len * along_len) as usize];
        for along in 0..along_len {
            for cross in 0..cross_len {
                let v = 128.0 - 100.0 * (2.0 * std::f64::consts::PI * cross as f64 / p).cos();
                grid[(along * cross_len + cross) as usize] = v;
            }
        }

        // Cuts: fade the stripe band to furrow brightness across the taper,
        // fully erased beyond it. The band is one period wide, so its edges
        // fall on furrow peaks and blend seamlessly.
        for cut in &self.cuts {
            let center = self.centerline(cut.ridge);
            let c0 = center.saturating_sub(half);
            let c1 = (center + half).min(cross_len - 1);
            for along in 0..along_len {
                // 0 = fully erased, 1 = intact stripe.
                let keep = if cut.keep_after {
                    (along as f64 - cut.at as f64) / CUT_TAPER as f64
                } else {
                    (cut.at as f64 - along as f64) / CUT_TAPER as f64
                }
                .clamp(0.0, 1.0);
                if keep >= 1.0 {
                    continue;
                }
                for cross in c0..=c1 {
                    let idx = (along * cross_len + cross) as usize;
                    grid[idx] = RIDGE_HIGH + keep * (grid[idx] - RIDGE_HIGH);
                }
            }
        }

        // Bridges: a thick dark connector between neighboring ridges. The
        // cross position follows an ease-out/ease-in curve, leaving each
        // trough steeply so the skeletal junctions stay near the bridge
        // ends instead of being absorbed along the ridge.
        for bridge in &self.bridges {
            let inset = self.bridge_inset();
            let c_start = self.centerline(bridge.ridge) as f64 + inset;
            let c_end = self.centerline(bridge.ridge + 1) as f64 - inset;
            let (a0, a1) = (bridge.from.min(bridge.to), bridge.from.max(bridge.to));
            let span = (bridge.to as f64 - bridge.from as f64).abs().max(1.0);
            for along in a0..=a1.min(along_len - 1) {
                let t = (along as f64 - bridge.from as f64).abs() / span;
                let center = c_start + ease_ends(t) * (c_end - c_start);
                // Bulge the middle: the block enhancement suppresses content
                // running against the dominant ridge flow, so the connector
                // needs extra mass where it crosses the furrow.
                let halfwidth = 1.6 + 1.4 * (std::f64::consts::PI * t).sin();
                let lo = (center - halfwidth).floor().max(0.0) as u32;
                let hi = (center + halfwidth).ceil().min(cross_len as f64 - 1.0) as u32;
                for cross in lo..=hi {
                    grid[(along * cross_len + cross) as usize] = RIDGE_LOW;
                }
            }
        }

        GrayImage::from_fn(self.width, self.height, |x, y| {
            let (cross, along) = if self.vertical { (x, y) } else { (y, x) };
            grid[(along * cross_len + cross) as usize].round().clamp(0.0, 255.0) as u8
        })
    }
}

/// Monotone 0..1 curve that is steep at both ends and gentle in the
/// middle (the inverse of a smoothstep ease).
fn ease_ends(t: f64) -> f64 {
    const GAMMA: f64 = 0.4;
    if t <= 0.5 {
        0.5 * (2.0 * t).powf(GAMMA)
    } else {
        1.0 - 0.5 * (2.0 * (1.0 - t)).powf(GAMMA)
    }
}

/// The enrollment fixture used by the demos: 256x256 vertical ridges with
/// three terminations and one bridge (two bifurcations). The period
/// divides the 32-pixel enhancement block, so full blocks are exactly
/// periodic under the block DFT and erased bands meet the stripes at their
/// bright peaks; both properties keep the enhancement from hallucinating
/// ghost ridges near the features.
pub fn demo_fingerprint() -> StripeFixture {
    StripeFixture::vertical(256, 256, 16)
        .with_cut(3, 64, true) // termination near (48, 70)
        .with_cut(9, 192, false) // termination near (144, 186)
        .with_cut(13, 96, true) // termination near (208, 102)
        .with_bridge(6, 128, 160) // bifurcations near (99, 128) and (109, 160)
}

/// A second, unrelated finger: same ridge flow but a feature layout with a
/// deliberately different pairwise-distance structure and opposite-sloped,
/// longer bridges. Used as the impostor probe.
pub fn impostor_fingerprint() -> StripeFixture {
    StripeFixture::vertical(256, 256, 16)
        .with_cut(5, 128, true) // termination near (80, 134)
        .with_cut(11, 64, false) // termination near (176, 58)
        .with_bridge(12, 208, 160) // bifurcations near (195, 208) and (205, 160)
        .with_bridge(3, 96, 48) // bifurcations near (51, 96) and (62, 48)
}
