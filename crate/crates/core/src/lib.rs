//! biostego-core: fingerprint minutiae extraction and matching, plus the
//! two steganographic channels the authentication gate protects — LSB image
//! embedding and list-based ("playlist") text covers.
//!
//! The processing chain: histogram equalization, block FFT enhancement,
//! adaptive binarization, direction/coherence segmentation with
//! morphological ROI cleanup, thinning to a unit-width skeleton, minutiae
//! marking with false-minutiae removal, and elastic minutiae matching.

pub mod config;
pub mod enhance;
pub mod listega;
pub mod matching;
pub mod minutiae;
pub mod pipeline;
pub mod raster;
pub mod segment;
pub mod stego;
pub mod store;
pub mod synthetic;

pub use config::PipelineConfig;
pub use matching::{MatchConfig, MatchResult};
pub use minutiae::{Minutia, MinutiaKind, MinutiaeTemplate, Skeleton};
pub use pipeline::{extract_template, run_stages, PipelineStages};
pub use raster::{load_gray, save_gray, BinaryImage, GrayImage};
pub use store::TemplateStore;
