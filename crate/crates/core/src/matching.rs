//! Minutiae matching: ridge-correlation reference selection, alignment into
//! the reference minutia's frame, and elastic tolerance-box pairing.

use std::f64::consts::PI;

use thiserror::Error;

use crate::minutiae::MinutiaeTemplate;

#[derive(Debug, Error)]
pub enum MatchError {
    #[error("no ridge pair exceeds the similarity threshold; nothing to align on")]
    NoCandidateReference,
}

/// Matching knobs. `r0` / `theta0` bound the positional and angular
/// deformation the elastic matcher tolerates; a candidate reference pair
/// needs ridge similarity above `similarity_threshold`; scores at or above
/// `decision_threshold` are accepted.
#[derive(Debug, Clone)]
pub struct MatchConfig {
    pub r0: f64,
    pub theta0: f64,
    pub similarity_threshold: f64,
    pub decision_threshold: u32,
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self { r0: 10.0, theta0: PI / 6.0, similarity_threshold: 0.8, decision_threshold: 25 }
    }
}

/// A minutia expressed in a reference minutia's frame: the reference sits
/// at the origin with its ridge direction along +x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignedMinutia {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

/// Match outcome. `score = round(100 * matched / template_count)`, in
/// 0..=100; `best_reference` names the (template, input) minutia indices of
/// the winning alignment.
#[derive(Debug, Clone)]
pub struct MatchResult {
    pub score: u32,
    pub matched_pairs: usize,
    pub template_count: usize,
    pub accepted: bool,
    pub best_reference: (usize, usize),
}

/// Normalized cross-correlation of two ridge x-coordinate sequences over
/// their common prefix length m = min(len a, len b):
/// S = sum(a_i b_i) / sqrt(sum a_i^2 * sum b_i^2), in [-1, 1].
/// Empty or all-zero prefixes score 0.
pub fn ridge_similarity(a: &[f64], b: &[f64]) -> f64 {
    let m = a.len().min(b.len());
    if m == 0 {
        return 0.0;
    }
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for i in 0..m {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na * nb).sqrt()).clamp(-1.0, 1.0)
}

/// Wrap an angle into (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Express `minutiae` (x, y, theta) in the frame of `reference`: translate
/// the reference to the origin and rotate so its direction becomes the +x
/// axis. The reference itself maps to (0, 0, 0), and pairwise distances are
/// preserved. No scaling is applied.
pub fn align_set(minutiae: &[(f64, f64, f64)], reference: (f64, f64, f64)) -> Vec<AlignedMinutia> {
    let (rx, ry, rt) = reference;
    let (sin_t, cos_t) = rt.sin_cos();
    minutiae
        .iter()
        .map(|&(x, y, t)| {
            let (dx, dy) = (x - rx, y - ry);
            AlignedMinutia {
                x: cos_t * dx + sin_t * dy,
                y: -sin_t * dx + cos_t * dy,
                theta: wrap_angle(t - rt),
            }
        })
        .collect()
}

/// Elastic pairing of two aligned sets: candidate pairs within `r0`
/// positional and `theta0` angular tolerance are taken greedily in order of
/// increasing distance (ties broken by indices), each minutia used at most
/// once. Returns the matched pair count.
pub fn elastic_match(
    template: &[AlignedMinutia],
    input: &[AlignedMinutia],
    r0: f64,
    theta0: f64,
) -> usize {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (ti, t) in template.iter().enumerate() {
        for (ii, inp) in input.iter().enumerate() {
            let dist = (t.x - inp.x).hypot(t.y - inp.y);
            if dist <= r0 && wrap_angle(t.theta - inp.theta).abs() <= theta0 {
                pairs.push((dist, ti, ii));
            }
        }
    }
    pairs.sort_by(|a, b| (a.0, a.1, a.2).partial_cmp(&(b.0, b.1, b.2)).unwrap());
    let mut used_t = vec![false; template.len()];
    let mut used_i = vec![false; input.len()];
    let mut matched = 0;
    for (_, ti, ii) in pairs {
        if !used_t[ti] && !used_i[ii] {
            used_t[ti] = true;
            used_i[ii] = true;
            matched += 1;
        }
    }
    matched
}

/// Full matcher: every cross pair of minutiae whose ridge samples correlate
/// above the similarity threshold becomes a candidate reference; both sets
/// are aligned to it and elastically matched. The best candidate's matched
/// count yields the score.
pub fn match_templates(
    template: &MinutiaeTemplate,
    input: &MinutiaeTemplate,
    config: &MatchConfig,
) -> Result<MatchResult, MatchError> {
    let t_points: Vec<(f64, f64, f64)> =
        template.minutiae.iter().map(|m| (m.x as f64, m.y as f64, m.theta)).collect();
    let i_points: Vec<(f64, f64, f64)> =
        input.minutiae.iter().map(|m| (m.x as f64, m.y as f64, m.theta)).collect();

    let mut best: Option<(usize, (usize, usize))> = None;
    for ti in 0..template.minutiae.len() {
        for ii in 0..input.minutiae.len() {
            let s = ridge_similarity(
                &template.minutiae[ti].samples,
                &input.minutiae[ii].samples,
            );
            if s <= config.similarity_threshold {
                continue;
            }
            let aligned_t = align_set(&t_points, t_points[ti]);
            let aligned_i = align_set(&i_points, i_points[ii]);
            let matched = elastic_match(&aligned_t, &aligned_i, config.r0, config.theta0);
            let better = match &best {
                None => true,
                Some((best_matched, _)) => matched > *best_matched,
            };
            if better {
                best = Some((matched, (ti, ii)));
            }
        }
    }

    let (matched, reference) = best.ok_or(MatchError::NoCandidateReference)?;
    let template_count = template.minutiae.len();
    let score =
        (100.0 * matched as f64 / template_count as f64 + 0.5).floor().min(100.0) as u32;
    Ok(MatchResult {
        score,
        matched_pairs: matched,
        template_count,
        accepted: score >= config.decision_threshold,
        best_reference: reference,
    })
}
