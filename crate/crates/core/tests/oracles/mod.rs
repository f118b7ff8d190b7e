//! Brute-force reference implementations used to check the pipeline. These
//! deliberately avoid the production code paths: the DFT is a direct
//! O(N^4) summation, components come from union-find, and minutiae come
//! from a plain per-pixel rescan.

use biostego_core::minutiae::{MinutiaKind, Skeleton};
use biostego_core::raster::GrayImage;

#[derive(Clone, Copy)]
struct C {
    re: f64,
    im: f64,
}

impl C {
    fn scale(self, s: f64) -> C {
        C { re: self.re * s, im: self.im * s }
    }
    fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Direct O(N^4) DFT-based block enhancement for a square image treated as
/// one block: forward transform by explicit double sum, spectrum scaled by
/// |F|^k, inverse transform, then the same renormalization policy the
/// production path documents (affine rescale to the input min/max,
/// round half up, clamp).
pub fn dft_enhance_oracle(image: &GrayImage, k: f64) -> GrayImage {
    let n = image.width() as usize;
    assert_eq!(image.height() as usize, n, "oracle expects a square block");

    // exp(-2*pi*i*t/n) table; indices (u*x + v*y) mod n.
    let mut fwd = Vec::with_capacity(n);
    let mut inv = Vec::with_capacity(n);
    for t in 0..n {
        let ang = -2.0 * std::f64::consts::PI * t as f64 / n as f64;
        fwd.push(C { re: ang.cos(), im: ang.sin() });
        inv.push(C { re: ang.cos(), im: -ang.sin() });
    }

    let mut spectrum = vec![C { re: 0.0, im: 0.0 }; n * n];
    for u in 0..n {
        for v in 0..n {
            let mut acc = C { re: 0.0, im: 0.0 };
            for y in 0..n {
                for x in 0..n {
                    let w = fwd[(u * x + v * y) % n];
                    acc.re += image.get(x as u32, y as u32) as f64 * w.re;
                    acc.im += image.get(x as u32, y as u32) as f64 * w.im;
                }
            }
            spectrum[u * n + v] = acc.scale(acc.norm().powf(k));
        }
    }

    let mut real = vec![0.0f64; n * n];
    let scale = 1.0 / (n * n) as f64;
    for y in 0..n {
        for x in 0..n {
            let mut acc = C { re: 0.0, im: 0.0 };
            for u in 0..n {
                for v in 0..n {
                    let w = inv[(u * x + v * y) % n];
                    let f = spectrum[u * n + v];
                    acc.re += f.re * w.re - f.im * w.im;
                    acc.im += f.re * w.im + f.im * w.re;
                }
            }
            real[y * n + x] = acc.re * scale;
        }
    }

    let lo = *image.data().iter().min().unwrap() as f64;
    let hi = *image.data().iter().max().unwrap() as f64;
    let r_lo = real.iter().cloned().fold(f64::INFINITY, f64::min);
    let r_hi = real.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let degenerate = (r_hi - r_lo) <= 1e-6 * r_hi.abs().max(1.0);
    let out: Vec<u8> = real
        .iter()
        .map(|&r| {
            let v = if degenerate { (lo + hi) / 2.0 } else { lo + (r - r_lo) * (hi - lo) / (r_hi - r_lo) };
            (v + 0.5).floor().clamp(0.0, 255.0) as u8
        })
        .collect();
    GrayImage::new(image.width(), image.height(), out).unwrap()
}

/// 8-connected component count by union-find over set pixels.
pub fn component_count_oracle(bits: &[u8], width: usize, height: usize) -> u32 {
    let mut parent: Vec<usize> = (0..bits.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for y in 0..height {
        for x in 0..width {
            if bits[y * width + x] == 0 {
                continue;
            }
            for (dx, dy) in [(1i64, 0i64), (-1, 1), (0, 1), (1, 1)] {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if nx < 0 || ny < 0 || nx >= width as i64 || ny >= height as i64 {
                    continue;
                }
                let nidx = ny as usize * width + nx as usize;
                if bits[nidx] == 1 {
                    let (a, b) = (find(&mut parent, y * width + x), find(&mut parent, nidx));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
    }
    let mut roots = std::collections::HashSet::new();
    for (i, &b) in bits.iter().enumerate() {
        if b == 1 {
            let r = find(&mut parent, i);
            roots.insert(r);
        }
    }
    roots.len() as u32
}

/// Exhaustive minutiae rescan: neighbor counts per set pixel, bifurcation
/// candidates merged across Chebyshev-distance-1 clusters to their
/// raster-first member, border margin applied.
pub fn mark_oracle(skel: &Skeleton, margin: u32) -> Vec<(u32, u32, MinutiaKind)> {
    let mut terms = Vec::new();
    let mut cands: Vec<(u32, u32)> = Vec::new();
    for y in 0..skel.height() {
        for x in 0..skel.width() {
            if !skel.is_set(x, y) {
                continue;
            }
            if x < margin
                || y < margin
                || x + margin >= skel.width()
                || y + margin >= skel.height()
            {
                continue;
            }
            let mut count = 0;
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    if nx >= 0
                        && ny >= 0
                        && nx < skel.width() as i64
                        && ny < skel.height() as i64
                        && skel.is_set(nx as u32, ny as u32)
                    {
                        count += 1;
                    }
                }
            }
            match count {
                1 => terms.push((x, y)),
                3 => cands.push((x, y)),
                _ => {}
            }
        }
    }

    // Union-find over candidates within Chebyshev distance 1.
    let mut parent: Vec<usize> = (0..cands.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            let dx = cands[i].0.abs_diff(cands[j].0);
            let dy = cands[i].1.abs_diff(cands[j].1);
            if dx.max(dy) <= 1 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut reps: std::collections::HashMap<usize, (u32, u32)> = std::collections::HashMap::new();
    for (i, &(x, y)) in cands.iter().enumerate() {
        let root = find(&mut parent, i);
        let entry = reps.entry(root).or_insert((x, y));
        if (y, x) < (entry.1, entry.0) {
            *entry = (x, y);
        }
    }

    let mut out: Vec<(u32, u32, MinutiaKind)> = terms
        .into_iter()
        .map(|(x, y)| (x, y, MinutiaKind::Termination))
        .chain(reps.into_values().map(|(x, y)| (x, y, MinutiaKind::Bifurcation)))
        .collect();
    out.sort_by_key(|&(x, y, kind)| (y, x, kind == MinutiaKind::Bifurcation));
    out
}
