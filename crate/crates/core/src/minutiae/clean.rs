//! Skeleton cleanup between thinning and marking: H-bridge artifacts,
//! isolated points, and short spurs hanging off otherwise clean ridges.

use super::{count_components, Skeleton};

/// Remove the classic thinning artifacts, in this order:
///
/// 1. H-breaks: the bridging pixel of an exact H pattern is deleted when
///    its removal does not change the component count.
/// 2. Isolated single pixels.
/// 3. Spurs: open-ended branches of at most `spur_iterations` pixels that
///    terminate at a junction are pruned; long open lines are untouched.
pub fn clean_skeleton(skel: &Skeleton, spur_iterations: u32) -> Skeleton {
    let mut out = skel.clone();
    remove_h_bridges(&mut out);
    remove_isolated(&mut out);
    remove_spurs(&mut out, spur_iterations);
    out
}

/// The two H templates: three set pixels above and below, clear to the
/// sides, plus the 90-degree rotation.
fn remove_h_bridges(skel: &mut Skeleton) {
    let (w, h) = (skel.width(), skel.height());
    let mut base = count_components(skel.bits(), w, h);
    for y in 1..h.saturating_sub(1) {
        for x in 1..w.saturating_sub(1) {
            if !skel.is_set(x, y) {
                continue;
            }
            let row = |dy: i64| -> [bool; 3] {
                [
                    skel.is_set_i64(x as i64 - 1, y as i64 + dy),
                    skel.is_set_i64(x as i64, y as i64 + dy),
                    skel.is_set_i64(x as i64 + 1, y as i64 + dy),
                ]
            };
            let (top, mid, bot) = (row(-1), row(0), row(1));
            let horizontal_h = top == [true; 3] && bot == [true; 3] && !mid[0] && !mid[2];
            let col = |dx: i64| -> [bool; 3] {
                [
                    skel.is_set_i64(x as i64 + dx, y as i64 - 1),
                    skel.is_set_i64(x as i64 + dx, y as i64),
                    skel.is_set_i64(x as i64 + dx, y as i64 + 1),
                ]
            };
            let (left, vmid, right) = (col(-1), col(0), col(1));
            let vertical_h = left == [true; 3] && right == [true; 3] && !vmid[0] && !vmid[2];
            if !(horizontal_h || vertical_h) {
                continue;
            }
            skel.clear(x, y);
            let after = count_components(skel.bits(), w, h);
            if after != base {
                // Bridge was load-bearing; put it back.
                skel.set(x, y);
            } else {
                base = after;
            }
        }
    }
}

fn remove_isolated(skel: &mut Skeleton) {
    let isolated: Vec<(u32, u32)> =
        skel.set_pixels().filter(|&(x, y)| skel.neighbor_count(x, y) == 0).collect();
    for (x, y) in isolated {
        skel.clear(x, y);
    }
}

fn remove_spurs(skel: &mut Skeleton, max_len: u32) {
    if max_len == 0 {
        return;
    }
    let endpoints: Vec<(u32, u32)> =
        skel.set_pixels().filter(|&(x, y)| skel.neighbor_count(x, y) == 1).collect();
    let mut doomed = Vec::new();
    for e in endpoints {
        if let Some(path) = spur_path(skel, e, max_len) {
            doomed.extend(path);
        }
    }
    for (x, y) in doomed {
        skel.clear(x, y);
    }
}

/// Walk inward from an endpoint, extending while there is a unique
/// continuation outside the walked path. Reaching a pixel with two or more
/// outside connections means the branch has met the main structure: the
/// walked pixels are the spur. A dead end means the component was a
/// free-standing line, which is kept, as are branches longer than
/// `max_len`.
fn spur_path(skel: &Skeleton, endpoint: (u32, u32), max_len: u32) -> Option<Vec<(u32, u32)>> {
    let mut path = vec![endpoint];
    let mut cur = endpoint;
    loop {
        if path.len() as u32 > max_len {
            return None;
        }
        let ext: Vec<(u32, u32)> = skel
            .set_neighbors(cur.0, cur.1)
            .into_iter()
            .filter(|p| !path.contains(p))
            .collect();
        match ext.as_slice() {
            [] => return None,
            [next] => {
                cur = *next;
                path.push(cur);
            }
            _ => return Some(path),
        }
    }
}
