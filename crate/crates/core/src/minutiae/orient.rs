//! Minutia orientation and ridge sampling by walking the skeleton.

use super::{Minutia, MinutiaKind, Skeleton, MAX_RIDGE_SAMPLES};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// A minutia ready for ridge sampling. For decomposed bifurcation arms the
/// walk must not step back through the branch pixel, which is remembered
/// here.
#[derive(Debug, Clone)]
pub struct OrientedMinutia {
    pub minutia: Minutia,
    pub walk_block: Option<(u32, u32)>,
}

/// Walk the ridge from `start`, never stepping onto `blocked` or back onto
/// the previous pixel, stopping at branches, ridge ends, or once the path
/// length reaches `max_len`. Returns the visited pixels including `start`.
fn walk_ridge(
    skel: &Skeleton,
    start: (u32, u32),
    blocked: Option<(u32, u32)>,
    max_len: f64,
) -> Vec<(u32, u32)> {
    let mut path = vec![start];
    let mut prev: Option<(u32, u32)> = None;
    let mut cur = start;
    let mut len = 0.0;
    loop {
        if len >= max_len {
            break;
        }
        let nexts: Vec<(u32, u32)> = skel
            .set_neighbors(cur.0, cur.1)
            .into_iter()
            .filter(|&p| Some(p) != prev && Some(p) != blocked)
            .collect();
        if nexts.len() != 1 {
            break; // ridge end, or a branch: sampling never forks
        }
        let next = nexts[0];
        len += step_length(cur, next);
        prev = Some(cur);
        cur = next;
        path.push(cur);
    }
    path
}

#[inline]
fn step_length(a: (u32, u32), b: (u32, u32)) -> f64 {
    if a.0 != b.0 && a.1 != b.1 {
        SQRT_2
    } else {
        1.0
    }
}

/// Direction of the ridge leaving `start`: walk up to path length `d`,
/// average the visited coordinates, and take the angle from `start` to that
/// centroid. A degenerate single-pixel ridge yields 0.
pub(crate) fn direction_from(
    skel: &Skeleton,
    start: (u32, u32),
    blocked: Option<(u32, u32)>,
    d: f64,
) -> f64 {
    let path = walk_ridge(skel, start, blocked, d);
    if path.len() < 2 {
        return 0.0;
    }
    let n = path.len() as f64;
    let sx = path.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let sy = path.iter().map(|p| p.1 as f64).sum::<f64>() / n;
    let (dy, dx) = (sy - start.1 as f64, sx - start.0 as f64);
    if dx == 0.0 && dy == 0.0 {
        0.0
    } else {
        dy.atan2(dx)
    }
}

/// Orientation of a single termination minutia (walk length D).
pub fn minutia_orientation(skel: &Skeleton, minutia: &Minutia, d: f64) -> f64 {
    direction_from(skel, (minutia.x, minutia.y), None, d)
}

/// Attach orientations. Terminations keep their position and get the walk
/// direction; each bifurcation is decomposed into one record per arm,
/// positioned on the pixel adjacent to the branch point, with that arm's
/// own direction and ridge id.
pub fn orient_minutiae(skel: &Skeleton, minutiae: &[Minutia], d: f64) -> Vec<OrientedMinutia> {
    let mut out = Vec::new();
    for m in minutiae {
        match m.kind {
            MinutiaKind::Termination => {
                let theta = direction_from(skel, (m.x, m.y), None, d);
                out.push(OrientedMinutia {
                    minutia: Minutia { theta, ..m.clone() },
                    walk_block: None,
                });
            }
            MinutiaKind::Bifurcation => {
                for (ax, ay) in skel.set_neighbors(m.x, m.y) {
                    let theta = direction_from(skel, (ax, ay), Some((m.x, m.y)), d);
                    out.push(OrientedMinutia {
                        minutia: Minutia {
                            x: ax,
                            y: ay,
                            theta,
                            kind: MinutiaKind::Bifurcation,
                            ridge_id: skel.label(ax, ay),
                        },
                        walk_block: Some((m.x, m.y)),
                    });
                }
            }
        }
    }
    out
}

/// Sample the ridge leaving `start` every `l` of path length, up to `n_max`
/// points, and express the samples in the minutia-local frame: translated
/// to the minutia and rotated by -theta, so the ridge initially extends
/// along local +x.
pub fn sample_ridge(
    skel: &Skeleton,
    start: (u32, u32),
    blocked: Option<(u32, u32)>,
    theta: f64,
    l: f64,
    n_max: usize,
) -> Vec<(f64, f64)> {
    if l <= 0.0 || n_max == 0 {
        return Vec::new();
    }
    let n_max = n_max.min(MAX_RIDGE_SAMPLES);
    let path = walk_ridge(skel, start, blocked, l * n_max as f64 + 2.0);
    let (sin_t, cos_t) = theta.sin_cos();
    let mut out = Vec::new();
    let mut cum = 0.0;
    let mut next_mark = l;
    for pair in path.windows(2) {
        cum += step_length(pair[0], pair[1]);
        while cum >= next_mark - 1e-9 && out.len() < n_max {
            let dx = pair[1].0 as f64 - start.0 as f64;
            let dy = pair[1].1 as f64 - start.1 as f64;
            out.push((cos_t * dx + sin_t * dy, -sin_t * dx + cos_t * dy));
            next_mark += l;
        }
        if out.len() >= n_max {
            break;
        }
    }
    out
}

/// Sample the ridge of an oriented minutia.
pub fn sample_ridge_for(
    skel: &Skeleton,
    oriented: &OrientedMinutia,
    l: f64,
    n_max: usize,
) -> Vec<(f64, f64)> {
    sample_ridge(
        skel,
        (oriented.minutia.x, oriented.minutia.y),
        oriented.walk_block,
        oriented.minutia.theta,
        l,
        n_max,
    )
}
