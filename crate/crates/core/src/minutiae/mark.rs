//! Candidate minutiae from 3x3 neighbor counting on the unit-width
//! skeleton: one set neighbor marks a ridge ending, three mark a branch.

use super::{Minutia, MinutiaKind, MinutiaeError, Skeleton};

/// Mark candidate minutiae. A set pixel with exactly 1 set neighbor is a
/// termination; exactly 3 is a bifurcation candidate. Adjacent bifurcation
/// candidates (Chebyshev distance 1) are collapsed into one, countering the
/// triple counting a branch produces when leftover spikes give the corner
/// pixels extra neighbors. Pixels within `border_margin` of the image edge
/// are skipped. Returned thetas are placeholders (0); orientation is a
/// separate pass.
pub fn mark_minutiae(skel: &Skeleton, border_margin: u32) -> Result<Vec<Minutia>, MinutiaeError> {
    if let Some((x, y)) = skel.unit_width_violation() {
        return Err(MinutiaeError::NotThinned { x, y });
    }

    let inside = |x: u32, y: u32| -> bool {
        x >= border_margin
            && y >= border_margin
            && x + border_margin < skel.width()
            && y + border_margin < skel.height()
    };

    let mut terminations = Vec::new();
    let mut candidates = Vec::new();
    for (x, y) in skel.set_pixels() {
        if !inside(x, y) {
            continue;
        }
        match skel.neighbor_count(x, y) {
            1 => terminations.push((x, y)),
            3 => candidates.push((x, y)),
            _ => {}
        }
    }

    let bifurcations = merge_adjacent(&candidates);

    let mut out: Vec<Minutia> = terminations
        .into_iter()
        .map(|(x, y)| Minutia {
            x,
            y,
            theta: 0.0,
            kind: MinutiaKind::Termination,
            ridge_id: skel.label(x, y),
        })
        .chain(bifurcations.into_iter().map(|(x, y)| Minutia {
            x,
            y,
            theta: 0.0,
            kind: MinutiaKind::Bifurcation,
            ridge_id: skel.label(x, y),
        }))
        .collect();
    out.sort_by_key(|m| (m.y, m.x, m.kind == MinutiaKind::Bifurcation));
    Ok(out)
}

/// Collapse each Chebyshev-adjacent cluster of candidates to its raster-order
/// first member.
fn merge_adjacent(candidates: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let n = candidates.len();
    let mut cluster = vec![usize::MAX; n];
    let mut next = 0usize;
    for i in 0..n {
        if cluster[i] != usize::MAX {
            continue;
        }
        let id = next;
        next += 1;
        let mut stack = vec![i];
        cluster[i] = id;
        while let Some(a) = stack.pop() {
            for b in 0..n {
                if cluster[b] != usize::MAX {
                    continue;
                }
                let dx = candidates[a].0.abs_diff(candidates[b].0);
                let dy = candidates[a].1.abs_diff(candidates[b].1);
                if dx.max(dy) <= 1 {
                    cluster[b] = id;
                    stack.push(b);
                }
            }
        }
    }
    let mut reps: Vec<Option<(u32, u32)>> = vec![None; next];
    for (i, &(x, y)) in candidates.iter().enumerate() {
        let slot = &mut reps[cluster[i]];
        match slot {
            None => *slot = Some((x, y)),
            Some((rx, ry)) => {
                if (y, x) < (*ry, *rx) {
                    *slot = Some((x, y));
                }
            }
        }
    }
    reps.into_iter().flatten().collect()
}
