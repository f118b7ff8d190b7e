//! The full extraction pipeline: enhancement, segmentation, thinning,
//! minutiae detection and template construction, with every intermediate
//! kept for inspection.

use thiserror::Error;

use crate::config::PipelineConfig;
use crate::enhance::{
    binarize_adaptive, fft_enhance, histogram_equalize, sobel_gradients, EnhanceError,
};
use crate::minutiae::{
    clean_skeleton, inter_ridge_distance, label_ridges, mark_minutiae, orient_minutiae,
    remove_false_minutiae, sample_ridge_for, thin, FalseRule, Minutia, MinutiaeError,
    MinutiaeTemplate, OrientedMinutia, Skeleton, TemplateMinutia, MAX_RIDGE_SAMPLES,
};
use crate::raster::{BinaryImage, GrayImage};
use crate::segment::{direction_map, roi_extract, DirectionMap, RoiMask};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Enhance(#[from] EnhanceError),
    #[error(transparent)]
    Minutiae(#[from] MinutiaeError),
    #[error("too few minutiae: {found} found, at least {floor} required")]
    TooFewMinutiae { found: usize, floor: usize },
}

/// Every intermediate of a pipeline run. `ridge_distance` is `None` when
/// the masked skeleton came out empty.
#[derive(Debug, Clone)]
pub struct PipelineStages {
    pub equalized: GrayImage,
    pub enhanced: GrayImage,
    pub binary: BinaryImage,
    pub direction: DirectionMap,
    pub roi: RoiMask,
    pub skeleton: Skeleton,
    pub ridge_distance: Option<f64>,
    pub marked: Vec<Minutia>,
    pub removed: Vec<(Minutia, FalseRule)>,
    /// Post-false-removal minutiae with orientations, bifurcations
    /// decomposed into their arms.
    pub oriented: Vec<OrientedMinutia>,
}

/// Run extraction tolerantly: a featureless image yields empty minutiae
/// rather than an error, which `analyze` relies on.
pub fn run_stages(image: &GrayImage, config: &PipelineConfig) -> Result<PipelineStages, PipelineError> {
    let equalized = histogram_equalize(image);
    let enhanced = fft_enhance(&equalized, config.fft_k, config.fft_block);
    let binary = binarize_adaptive(&enhanced, config.binarize_block);

    let gradients = sobel_gradients(&enhanced)?;
    let direction =
        direction_map(&gradients, config.direction_block, config.certainty_threshold());
    let roi = roi_extract(&direction, config.roi_radius);

    let masked = BinaryImage::from_fn(binary.width(), binary.height(), |x, y| {
        if roi.contains(x, y) {
            binary.get(x, y)
        } else {
            1 // furrow outside the region of interest
        }
    });

    let skeleton = label_ridges(&clean_skeleton(&thin(&masked), config.spur_iterations));
    let marked = mark_minutiae(&skeleton, config.border_margin)?;

    let (ridge_distance, removed, oriented) = match inter_ridge_distance(&skeleton) {
        Ok(d) => {
            let removal = remove_false_minutiae(&marked, &skeleton, d);
            let oriented = orient_minutiae(&skeleton, &removal.kept, d);
            (Some(d), removal.removed, oriented)
        }
        Err(MinutiaeError::EmptySkeleton) => (None, Vec::new(), Vec::new()),
        Err(other) => return Err(other.into()),
    };

    Ok(PipelineStages {
        equalized,
        enhanced,
        binary,
        direction,
        roi,
        skeleton,
        ridge_distance,
        marked,
        removed,
        oriented,
    })
}

/// Run extraction and build the persistent template. Fails with
/// `TooFewMinutiae` when fewer than `config.min_minutiae` minutiae survive
/// false removal.
pub fn extract_template(
    image: &GrayImage,
    user_id: &str,
    config: &PipelineConfig,
) -> Result<(MinutiaeTemplate, PipelineStages), PipelineError> {
    let stages = run_stages(image, config)?;
    let survivors = stages.marked.len() - stages.removed.len();
    if survivors < config.min_minutiae || stages.ridge_distance.is_none() {
        return Err(PipelineError::TooFewMinutiae {
            found: survivors,
            floor: config.min_minutiae,
        });
    }
    let d = stages.ridge_distance.expect("checked above");

    let minutiae = stages
        .oriented
        .iter()
        .map(|om| {
            let samples = sample_ridge_for(&stages.skeleton, om, d, MAX_RIDGE_SAMPLES)
                .into_iter()
                .map(|(lx, _)| lx)
                .collect();
            TemplateMinutia {
                x: om.minutia.x,
                y: om.minutia.y,
                theta: om.minutia.theta,
                kind: om.minutia.kind,
                ridge_id: om.minutia.ridge_id,
                samples,
            }
        })
        .collect();

    let template = MinutiaeTemplate {
        user_id: user_id.to_string(),
        width: image.width(),
        height: image.height(),
        ridge_distance: d,
        minutiae,
    };
    Ok((template, stages))
}
