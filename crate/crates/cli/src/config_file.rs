//! Optional TOML settings file. Every field mirrors a pipeline knob and is
//! optional; omitted fields keep their defaults.

use std::path::Path;

use serde::Deserialize;

use biostego_core::PipelineConfig;

use crate::errors::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    k: Option<f64>,
    fft_block: Option<u32>,
    binarize_block: Option<u32>,
    direction_block: Option<u32>,
    e_threshold: Option<f64>,
    roi_radius: Option<u32>,
    spur_iterations: Option<u32>,
    border_margin: Option<u32>,
    min_minutiae: Option<usize>,
    r0: Option<f64>,
    theta0: Option<f64>,
    similarity_threshold: Option<f64>,
    decision_threshold: Option<u32>,
}

pub fn load(path: Option<&Path>) -> Result<PipelineConfig, CliError> {
    let mut cfg = PipelineConfig::default();
    let Some(path) = path else { return Ok(cfg) };
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { context: path.to_path_buf(), source })?;
    let file: FileConfig = toml::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;

    macro_rules! take {
        ($($field:ident => $target:ident),*) => {
            $(if let Some(v) = file.$field { cfg.$target = v; })*
        };
    }
    take!(
        k => fft_k,
        fft_block => fft_block,
        binarize_block => binarize_block,
        direction_block => direction_block,
        e_threshold => e_threshold,
        roi_radius => roi_radius,
        spur_iterations => spur_iterations,
        border_margin => border_margin,
        min_minutiae => min_minutiae,
        r0 => r0,
        theta0 => theta0,
        similarity_threshold => similarity_threshold,
        decision_threshold => decision_threshold
    );
    Ok(cfg)
}
