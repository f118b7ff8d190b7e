//! Parallel two-subiteration thinning. Boundary pixels are peeled while the
//! Hilditch crossing number guards connectivity, so the ridge structure of
//! the input is preserved while ridges shrink to unit width.

use crate::raster::BinaryImage;

use super::Skeleton;

/// Thin the ridge map (0 = ridge in the input convention) to a unit-width
/// skeleton. Iterates two-subiteration peeling to a fixed point, then
/// collapses residual all-set 2x2 squares by sequential removal of simple
/// pixels. The result is idempotent and keeps the 8-connected component
/// count of the input ridges.
pub fn thin(binary: &BinaryImage) -> Skeleton {
    let (w, h) = (binary.width(), binary.height());
    let mut bits: Vec<u8> = binary.data().iter().map(|&b| 1 - b).collect();
    loop {
        let peeled = peel_to_fixpoint(&mut bits, w, h);
        let collapsed = collapse_squares(&mut bits, w, h);
        if !peeled && !collapsed {
            break;
        }
    }
    Skeleton::from_bits(w, h, bits)
}

#[inline]
fn neighbor_states(bits: &[u8], w: u32, h: u32, x: i64, y: i64) -> [bool; 8] {
    let mut n = [false; 8];
    for (i, &(dx, dy)) in super::NEIGHBORS_8.iter().enumerate() {
        let (nx, ny) = (x + dx, y + dy);
        n[i] = nx >= 0
            && ny >= 0
            && nx < w as i64
            && ny < h as i64
            && bits[ny as usize * w as usize + nx as usize] == 1;
    }
    n
}

/// Hilditch crossing number: the count of distinct neighbor runs around the
/// pixel. 1 means removal cannot split the local foreground.
#[inline]
fn crossing_number(n: &[bool; 8]) -> u8 {
    u8::from(!n[0] && (n[1] || n[2]))
        + u8::from(!n[2] && (n[3] || n[4]))
        + u8::from(!n[4] && (n[5] || n[6]))
        + u8::from(!n[6] && (n[7] || n[0]))
}

#[inline]
fn deletable(n: &[bool; 8], first_pass: bool) -> bool {
    if crossing_number(n) != 1 {
        return false;
    }
    let n1 = u8::from(n[0] || n[1])
        + u8::from(n[2] || n[3])
        + u8::from(n[4] || n[5])
        + u8::from(n[6] || n[7]);
    let n2 = u8::from(n[1] || n[2])
        + u8::from(n[3] || n[4])
        + u8::from(n[5] || n[6])
        + u8::from(n[7] || n[0]);
    let m = n1.min(n2);
    if !(2..=3).contains(&m) {
        return false;
    }
    if first_pass {
        !((n[1] || n[2] || !n[7]) && n[0])
    } else {
        !((n[5] || n[6] || !n[3]) && n[4])
    }
}

fn peel_to_fixpoint(bits: &mut [u8], w: u32, h: u32) -> bool {
    let mut changed_any = false;
    let mut to_delete = Vec::new();
    loop {
        let mut changed = false;
        for first_pass in [true, false] {
            to_delete.clear();
            for y in 0..h as i64 {
                for x in 0..w as i64 {
                    if bits[y as usize * w as usize + x as usize] == 0 {
                        continue;
                    }
                    if deletable(&neighbor_states(bits, w, h, x, y), first_pass) {
                        to_delete.push((x as usize, y as usize));
                    }
                }
            }
            for &(x, y) in &to_delete {
                bits[y * w as usize + x] = 0;
            }
            changed |= !to_delete.is_empty();
        }
        if !changed {
            break;
        }
        changed_any = true;
    }
    changed_any
}

/// Remove pixels that sit in an all-set 2x2 square whenever the removal is
/// connectivity-safe. The cheap local test (crossing number 1) handles
/// almost everything; pixels the local test is too conservative for fall
/// back to an exact component recount. Squares every one of whose pixels
/// is load-bearing stay as they are; peeling them would disconnect.
fn collapse_squares(bits: &mut [u8], w: u32, h: u32) -> bool {
    let mut changed_any = false;
    loop {
        let mut changed = false;
        for y in 0..h as i64 {
            for x in 0..w as i64 {
                let idx = y as usize * w as usize + x as usize;
                if bits[idx] == 0 || !in_full_square(bits, w, h, x, y) {
                    continue;
                }
                if crossing_number(&neighbor_states(bits, w, h, x, y)) == 1 {
                    bits[idx] = 0;
                    changed = true;
                }
            }
        }
        if !changed {
            // Local test stuck; try one globally safe deletion.
            let before = super::count_components(bits, w, h);
            'search: for y in 0..h as i64 {
                for x in 0..w as i64 {
                    let idx = y as usize * w as usize + x as usize;
                    if bits[idx] == 0 || !in_full_square(bits, w, h, x, y) {
                        continue;
                    }
                    bits[idx] = 0;
                    if super::count_components(bits, w, h) == before {
                        changed = true;
                        break 'search;
                    }
                    bits[idx] = 1;
                }
            }
        }
        if !changed {
            break;
        }
        changed_any = true;
    }
    changed_any
}

fn in_full_square(bits: &[u8], w: u32, h: u32, x: i64, y: i64) -> bool {
    let at = |px: i64, py: i64| -> bool {
        px >= 0
            && py >= 0
            && px < w as i64
            && py < h as i64
            && bits[py as usize * w as usize + px as usize] == 1
    };
    for &(ox, oy) in &[(x - 1, y - 1), (x, y - 1), (x - 1, y), (x, y)] {
        if at(ox, oy) && at(ox + 1, oy) && at(ox, oy + 1) && at(ox + 1, oy + 1) {
            return true;
        }
    }
    false
}
