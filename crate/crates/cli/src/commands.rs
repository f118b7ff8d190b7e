//! Command implementations. Channel output is produced strictly after the
//! verification gate passes.

use std::path::Path;

use biostego_core::listega::{decode_cover, generate_cover, ListCover, SongBank};
use biostego_core::matching::{match_templates, MatchError, MatchResult};
use biostego_core::minutiae::MinutiaKind;
use biostego_core::pipeline::{extract_template, run_stages};
use biostego_core::raster::{load_gray, save_gray, GrayImage};
use biostego_core::stego::{embed_lsb, extract_lsb};
use biostego_core::store::TemplateStore;
use biostego_core::PipelineConfig;

use crate::errors::CliError;
use crate::Channel;

pub fn enroll(
    store_dir: &Path,
    user: &str,
    fingerprint: &Path,
    overwrite: bool,
    config: &PipelineConfig,
) -> Result<u8, CliError> {
    let store = TemplateStore::open(store_dir)?;
    if store.exists(user)? && !overwrite {
        return Err(CliError::Usage(format!(
            "user {user:?} is already enrolled (pass --overwrite to replace)"
        )));
    }
    let image = load_gray(fingerprint)?;
    let (template, _) = extract_template(&image, user, config)?;
    store.save(&template, overwrite)?;
    println!(
        "enrolled user={user} minutiae={} D={:.6}",
        template.minutiae.len(),
        template.ridge_distance
    );
    Ok(0)
}

/// Run the pipeline on a probe and match it against the stored template.
/// A probe that yields no usable minutiae, or no candidate reference pair,
/// scores 0 and is rejected rather than treated as an error.
fn gate(
    store: &TemplateStore,
    user: &str,
    fingerprint: &Path,
    config: &PipelineConfig,
) -> Result<MatchResult, CliError> {
    let template = store.load(user)?;
    let image = load_gray(fingerprint)?;
    let rejected = |score| MatchResult {
        score,
        matched_pairs: 0,
        template_count: template.minutiae.len(),
        accepted: false,
        best_reference: (0, 0),
    };
    let probe = match extract_template(&image, "probe", config) {
        Ok((probe, _)) => probe,
        Err(biostego_core::pipeline::PipelineError::TooFewMinutiae { .. }) => {
            return Ok(rejected(0));
        }
        Err(other) => return Err(other.into()),
    };
    match match_templates(&template, &probe, &config.match_config()) {
        Ok(result) => Ok(result),
        Err(MatchError::NoCandidateReference) => Ok(rejected(0)),
    }
}

pub fn verify(
    store_dir: &Path,
    user: &str,
    fingerprint: &Path,
    config: &PipelineConfig,
) -> Result<u8, CliError> {
    let store = TemplateStore::open(store_dir)?;
    let result = gate(&store, user, fingerprint, config)?;
    println!("score={} accepted={}", result.score, result.accepted);
    Ok(if result.accepted { 0 } else { 1 })
}

pub struct SendArgs<'a> {
    pub store: &'a Path,
    pub user: &'a str,
    pub fingerprint: &'a Path,
    pub channel: Channel,
    pub payload: &'a Path,
    pub cover: Option<&'a Path>,
    pub bank: Option<&'a Path>,
    pub seed: u64,
    pub out: &'a Path,
    pub config: &'a PipelineConfig,
}

pub fn send(args: SendArgs<'_>) -> Result<u8, CliError> {
    let store = TemplateStore::open(args.store)?;
    let result = gate(&store, args.user, args.fingerprint, args.config)?;
    if !result.accepted {
        return Err(CliError::AuthenticationFailed {
            user: args.user.to_string(),
            score: result.score,
        });
    }

    let payload = std::fs::read(args.payload)
        .map_err(|source| CliError::Io { context: args.payload.to_path_buf(), source })?;
    match args.channel {
        Channel::Lsb => {
            let cover_path = args.cover.ok_or_else(|| {
                CliError::Usage("--cover is required for the lsb channel".into())
            })?;
            let cover = load_gray(cover_path)?;
            let stego = embed_lsb(&cover, &payload)?;
            save_gray(&stego, args.out)?;
        }
        Channel::List => {
            let bank_path = args.bank.ok_or_else(|| {
                CliError::Usage("--bank is required for the list channel".into())
            })?;
            let bank = SongBank::load(bank_path)?;
            let cover = generate_cover(&payload, &bank, args.seed);
            std::fs::write(args.out, cover.serialize())
                .map_err(|source| CliError::Io { context: args.out.to_path_buf(), source })?;
        }
    }
    println!("sent payload={} out={}", payload.len(), args.out.display());
    Ok(0)
}

pub fn receive(
    store_dir: &Path,
    user: &str,
    fingerprint: &Path,
    channel: Channel,
    input: &Path,
    out: &Path,
    config: &PipelineConfig,
) -> Result<u8, CliError> {
    let store = TemplateStore::open(store_dir)?;
    let result = gate(&store, user, fingerprint, config)?;
    if !result.accepted {
        return Err(CliError::AuthenticationFailed { user: user.to_string(), score: result.score });
    }

    let payload = match channel {
        Channel::Lsb => extract_lsb(&load_gray(input)?)?,
        Channel::List => {
            let text = std::fs::read_to_string(input)
                .map_err(|source| CliError::Io { context: input.to_path_buf(), source })?;
            decode_cover(&ListCover::parse(&text).lines)?
        }
    };
    std::fs::write(out, &payload)
        .map_err(|source| CliError::Io { context: out.to_path_buf(), source })?;
    println!("received payload={} out={}", payload.len(), out.display());
    Ok(0)
}

pub fn analyze(fingerprint: &Path, out_dir: &Path, config: &PipelineConfig) -> Result<u8, CliError> {
    let image = load_gray(fingerprint)?;
    let stages = run_stages(&image, config)?;
    std::fs::create_dir_all(out_dir)
        .map_err(|source| CliError::Io { context: out_dir.to_path_buf(), source })?;

    save_gray(&stages.equalized, out_dir.join("equalized.pgm"))?;
    save_gray(&stages.enhanced, out_dir.join("enhanced.pgm"))?;
    save_gray(&stages.binary.to_gray(), out_dir.join("binarized.pgm"))?;
    let roi_img = GrayImage::from_fn(image.width(), image.height(), |x, y| {
        if stages.roi.contains(x, y) {
            255
        } else {
            0
        }
    });
    save_gray(&roi_img, out_dir.join("roi.pgm"))?;
    save_gray(&stages.skeleton.to_gray(), out_dir.join("thinned.pgm"))?;

    // Overlay: skeleton base with a hollow square per termination and a
    // diagonal cross per bifurcation record.
    let mut overlay = stages.skeleton.to_gray().into_data();
    let (w, h) = (image.width() as i64, image.height() as i64);
    let mut put = |x: i64, y: i64, v: u8| {
        if x >= 0 && y >= 0 && x < w && y < h {
            overlay[(y * w + x) as usize] = v;
        }
    };
    for om in &stages.oriented {
        let (cx, cy) = (om.minutia.x as i64, om.minutia.y as i64);
        match om.minutia.kind {
            MinutiaKind::Termination => {
                for d in -2..=2 {
                    put(cx + d, cy - 2, 96);
                    put(cx + d, cy + 2, 96);
                    put(cx - 2, cy + d, 96);
                    put(cx + 2, cy + d, 96);
                }
            }
            MinutiaKind::Bifurcation => {
                for d in -2..=2 {
                    put(cx + d, cy + d, 160);
                    put(cx + d, cy - d, 160);
                }
            }
        }
    }
    let overlay = GrayImage::new(image.width(), image.height(), overlay)
        .expect("dimensions unchanged");
    save_gray(&overlay, out_dir.join("minutiae.pgm"))?;

    let terminations =
        stages.oriented.iter().filter(|m| m.minutia.kind == MinutiaKind::Termination).count();
    let bifurcations = stages.oriented.len() - terminations;
    let marked_terms =
        stages.marked.iter().filter(|m| m.kind == MinutiaKind::Termination).count();
    let report = format!(
        "width={} height={}\nD={:.6}\nroi_pixels={}\nskeleton_pixels={}\n\
         marked={} marked_terminations={} marked_bifurcations={}\nremoved_false={}\n\
         minutiae={} terminations={} bifurcations={}\n",
        image.width(),
        image.height(),
        stages.ridge_distance.unwrap_or(0.0),
        stages.roi.count(),
        stages.skeleton.count_set(),
        stages.marked.len(),
        marked_terms,
        stages.marked.len() - marked_terms,
        stages.removed.len(),
        stages.oriented.len(),
        terminations,
        bifurcations,
    );
    let report_path = out_dir.join("report.txt");
    std::fs::write(&report_path, report)
        .map_err(|source| CliError::Io { context: report_path.clone(), source })?;
    println!("analyzed fingerprint={} out_dir={}", fingerprint.display(), out_dir.display());
    Ok(0)
}
