//! Inter-ridge distance and rule-based false minutiae removal.

use std::f64::consts::PI;

use super::orient::direction_from;
use super::{Minutia, MinutiaKind, MinutiaeError, Skeleton};

/// Average inter-ridge distance D: for each row containing ridge pixels the
/// spacing is row width / ridge-pixel count, and D is the mean over such
/// rows.
pub fn inter_ridge_distance(skel: &Skeleton) -> Result<f64, MinutiaeError> {
    let mut total = 0.0;
    let mut rows = 0u32;
    for y in 0..skel.height() {
        let count = (0..skel.width()).filter(|&x| skel.is_set(x, y)).count();
        if count > 0 {
            total += skel.width() as f64 / count as f64;
            rows += 1;
        }
    }
    if rows == 0 {
        return Err(MinutiaeError::EmptySkeleton);
    }
    Ok(total / rows as f64)
}

/// Which removal rule fired for a discarded minutia.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FalseRule {
    /// Bifurcation and termination on the same ridge closer than D.
    BifurcationTermination,
    /// Two bifurcations on the same ridge closer than D.
    BifurcationPair,
    /// Facing terminations of a broken ridge: different ridges, closer than
    /// D, aligned orientations, nothing in between.
    BrokenRidge,
    /// Two terminations on the same ridge closer than D (a short spur ridge).
    TerminationPair,
}

#[derive(Debug, Clone)]
pub struct FalseRemoval {
    pub kept: Vec<Minutia>,
    pub removed: Vec<(Minutia, FalseRule)>,
}

/// Apply the false-minutiae rules in order. Distances are Euclidean; each
/// rule scans the survivors of the previous one and removes both members of
/// every offending pair.
pub fn remove_false_minutiae(minutiae: &[Minutia], skel: &Skeleton, d: f64) -> FalseRemoval {
    let mut alive: Vec<bool> = vec![true; minutiae.len()];
    let mut removed = Vec::new();

    // Walk directions for terminations, computed on demand for the
    // broken-ridge rule.
    let directions: Vec<Option<f64>> = minutiae
        .iter()
        .map(|m| {
            (m.kind == MinutiaKind::Termination)
                .then(|| direction_from(skel, (m.x, m.y), None, d))
        })
        .collect();

    type PairPredicate = Box<dyn Fn(&Minutia, &Minutia) -> bool>;
    let stages: [(FalseRule, PairPredicate); 4] = [
        (
            FalseRule::BifurcationTermination,
            Box::new(move |a, b| {
                a.kind != b.kind && a.ridge_id == b.ridge_id && a.distance(b) < d
            }),
        ),
        (
            FalseRule::BifurcationPair,
            Box::new(move |a, b| {
                a.kind == MinutiaKind::Bifurcation
                    && b.kind == MinutiaKind::Bifurcation
                    && a.ridge_id == b.ridge_id
                    && a.distance(b) < d
            }),
        ),
        (FalseRule::BrokenRidge, Box::new(|_, _| false)), // handled below
        (
            FalseRule::TerminationPair,
            Box::new(move |a, b| {
                a.kind == MinutiaKind::Termination
                    && b.kind == MinutiaKind::Termination
                    && a.ridge_id == b.ridge_id
                    && a.distance(b) < d
            }),
        ),
    ];

    for (rule, predicate) in &stages {
        let snapshot = alive.clone();
        let mut doomed = vec![false; minutiae.len()];
        for i in 0..minutiae.len() {
            if !snapshot[i] {
                continue;
            }
            for j in i + 1..minutiae.len() {
                if !snapshot[j] {
                    continue;
                }
                let hit = if *rule == FalseRule::BrokenRidge {
                    broken_ridge_pair(minutiae, &directions, &snapshot, i, j, d)
                } else {
                    predicate(&minutiae[i], &minutiae[j])
                };
                if hit {
                    doomed[i] = true;
                    doomed[j] = true;
                }
            }
        }
        for i in 0..minutiae.len() {
            if doomed[i] && alive[i] {
                alive[i] = false;
                removed.push((minutiae[i].clone(), *rule));
            }
        }
    }

    let kept =
        minutiae.iter().zip(&alive).filter(|(_, &a)| a).map(|(m, _)| m.clone()).collect();
    FalseRemoval { kept, removed }
}

/// Broken-ridge test: two terminations on different ridges, closer than D,
/// whose walk directions agree as orientations (mod pi) within pi/6, with
/// no third termination inside the pair's bounding box widened by 2 px.
fn broken_ridge_pair(
    minutiae: &[Minutia],
    directions: &[Option<f64>],
    alive: &[bool],
    i: usize,
    j: usize,
    d: f64,
) -> bool {
    let (a, b) = (&minutiae[i], &minutiae[j]);
    if a.kind != MinutiaKind::Termination || b.kind != MinutiaKind::Termination {
        return false;
    }
    if a.ridge_id == b.ridge_id || a.distance(b) >= d {
        return false;
    }
    let (ta, tb) = match (directions[i], directions[j]) {
        (Some(ta), Some(tb)) => (ta, tb),
        _ => return false,
    };
    if orientation_difference(ta, tb) >= PI / 6.0 {
        return false;
    }
    // Corridor check.
    let x0 = a.x.min(b.x).saturating_sub(2);
    let x1 = a.x.max(b.x) + 2;
    let y0 = a.y.min(b.y).saturating_sub(2);
    let y1 = a.y.max(b.y) + 2;
    for (k, m) in minutiae.iter().enumerate() {
        if k == i || k == j || !alive[k] || m.kind != MinutiaKind::Termination {
            continue;
        }
        if (x0..=x1).contains(&m.x) && (y0..=y1).contains(&m.y) {
            return false;
        }
    }
    true
}

/// Difference between two walk directions taken as undirected orientations,
/// in [0, pi/2]. Facing terminations of a broken ridge walk in opposite
/// directions yet lie on the same orientation.
fn orientation_difference(a: f64, b: f64) -> f64 {
    let mut diff = (a - b).rem_euclid(PI);
    if diff > PI / 2.0 {
        diff = PI - diff;
    }
    diff
}
