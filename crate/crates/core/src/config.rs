//! Pipeline configuration. Every processing constant is a named knob with
//! its conventional default.

use std::f64::consts::PI;

use thiserror::Error;

use crate::matching::MatchConfig;

#[derive(Debug, Error)]
#[error("invalid config: {0}")]
pub struct ConfigError(pub String);

/// Knobs for the extraction and matching pipeline.
///
/// `fft_k` boosts a block's dominant frequencies: stronger boosts repair
/// gapped ridges, while overdoing it bleeds neighboring ridges together
/// and manufactures branch points. `e_threshold` is the normalized coherence cut:
/// a block counts as foreground when its certainty reaches
/// `e_threshold / W^2`, W being `direction_block` (a perfectly coherent
/// block scores exactly `1 / W^2`).
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Spectral boost exponent for block FFT enhancement.
    pub fft_k: f64,
    /// FFT processing block edge, pixels.
    pub fft_block: u32,
    /// Adaptive binarization block edge, pixels.
    pub binarize_block: u32,
    /// Direction/certainty block edge W, pixels.
    pub direction_block: u32,
    /// Normalized foreground coherence threshold.
    pub e_threshold: f64,
    /// Structuring radius for ROI OPEN/CLOSE, pixels.
    pub roi_radius: u32,
    /// Maximum spur length pruned from the skeleton, pixels.
    pub spur_iterations: u32,
    /// Minutiae closer than this to the image edge are discarded, pixels.
    pub border_margin: u32,
    /// Enrollment fails below this many minutiae after false removal.
    pub min_minutiae: usize,
    /// Positional tolerance of the elastic matcher, pixels.
    pub r0: f64,
    /// Angular tolerance of the elastic matcher, radians.
    pub theta0: f64,
    /// Ridge-correlation gate for candidate reference pairs.
    pub similarity_threshold: f64,
    /// Accept scores at or above this value (0..=100).
    pub decision_threshold: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            fft_k: 0.45,
            fft_block: 32,
            binarize_block: 16,
            direction_block: 16,
            e_threshold: 0.05,
            roi_radius: 16,
            spur_iterations: 4,
            border_margin: 10,
            min_minutiae: 4,
            r0: 10.0,
            theta0: PI / 6.0,
            similarity_threshold: 0.8,
            decision_threshold: 25,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.fft_k < 0.0 {
            return Err(ConfigError("fft_k must be non-negative".into()));
        }
        if self.fft_block == 0 || self.binarize_block == 0 {
            return Err(ConfigError("block sizes must be positive".into()));
        }
        if self.direction_block < 2 {
            return Err(ConfigError("direction_block must be at least 2".into()));
        }
        if self.e_threshold < 0.0 || self.e_threshold.is_nan() {
            return Err(ConfigError("e_threshold must be non-negative".into()));
        }
        if !self.r0.is_finite() || self.r0 <= 0.0 || !self.theta0.is_finite() || self.theta0 <= 0.0 {
            return Err(ConfigError("matcher tolerances must be positive".into()));
        }
        let gate_ok = self.similarity_threshold > 0.0 && self.similarity_threshold <= 1.0;
        if !gate_ok {
            return Err(ConfigError("similarity_threshold must be in (0, 1]".into()));
        }
        if self.decision_threshold > 100 {
            return Err(ConfigError("decision_threshold must be in 0..=100".into()));
        }
        if self.min_minutiae == 0 {
            return Err(ConfigError("min_minutiae must be positive".into()));
        }
        Ok(())
    }

    /// Absolute certainty threshold compared against E.
    pub fn certainty_threshold(&self) -> f64 {
        self.e_threshold / (self.direction_block * self.direction_block) as f64
    }

    pub fn match_config(&self) -> MatchConfig {
        MatchConfig {
            r0: self.r0,
            theta0: self.theta0,
            similarity_threshold: self.similarity_threshold,
            decision_threshold: self.decision_threshold,
        }
    }
}
