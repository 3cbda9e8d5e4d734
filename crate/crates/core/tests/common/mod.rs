//! Independent reference computations. Nothing here calls into the code
//! paths it is used to check; only plain data types cross over.
#![allow(dead_code)]

pub const EPS: f64 = 1e-3;

pub fn splitmix(state: u64) -> (u64, u64) {
    let st = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = st;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (z ^ (z >> 31), st)
}

pub fn mask(session: u64, h: u64, n: usize) -> Vec<bool> {
    let mut st = session ^ (h + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut out = Vec::with_capacity(n);
    let mut word = 0;
    for t in 0..n {
        if t % 64 == 0 {
            let (v, next) = splitmix(st);
            word = v;
            st = next;
        }
        out.push(word >> (t % 64) & 1 == 1);
    }
    out
}

/// `bin_K(h) || (s XOR r_h)`, or `s` itself when `K = 0`.
pub fn candidate(h: u64, k: u32, s: &[bool], session: u64) -> Vec<bool> {
    if k == 0 {
        return s.to_vec();
    }
    let mut z: Vec<bool> = format!("{h:0width$b}", width = k as usize)
        .chars()
        .map(|c| c == '1')
        .collect();
    z.extend(s.iter().zip(mask(session, h, s.len())).map(|(a, b)| a ^ b));
    z
}

fn smoothed(pixels: &[u8]) -> Vec<f64> {
    let mut counts = vec![0.0f64; 256];
    for &p in pixels {
        counts[p as usize] += 1.0;
    }
    let total = pixels.len() as f64 + 256.0 * EPS;
    counts.iter().map(|c| (c + EPS) / total).collect()
}

/// KL(cover || LSB stego) after writing `payload` along `path`.
pub fn lsb_kl(cover: &[u8], path: &[usize], payload: &[bool]) -> f64 {
    let mut stego = cover.to_vec();
    for (&pos, &b) in path.iter().zip(payload) {
        stego[pos] = stego[pos] / 2 * 2 + b as u8;
    }
    let p = smoothed(cover);
    let q = smoothed(&stego);
    p.iter().zip(&q).map(|(a, b)| a * (a / b).log2()).sum()
}

/// Brute force over all `2^n` flip vectors, visited in lexicographic order
/// of `(f_0, f_1, ...)`; returns the cost and the flip mask (bit j = column j).
pub fn block_brute(cover: &[bool], weights: &[f64], target: u16, columns: &[u16]) -> (f64, u16) {
    let n = columns.len();
    let mut best = (f64::INFINITY, 0u16);
    for x in 0u32..1 << n {
        let flips: Vec<bool> = (0..n).map(|j| x >> (n - 1 - j) & 1 == 1).collect();
        let mut syn = 0u16;
        let mut cost = 0.0;
        for j in 0..n {
            if cover[j] ^ flips[j] {
                syn ^= columns[j];
            }
            if flips[j] {
                cost += weights[j];
            }
        }
        if syn == target && cost < best.0 {
            let mask = (0..n).filter(|&j| flips[j]).fold(0u16, |m, j| m | 1 << j);
            best = (cost, mask);
        }
    }
    best
}

pub fn texture_weight(pixels: &[u8], width: usize, height: usize, pos: usize) -> f64 {
    let (r, c) = ((pos / width) as i64, (pos % width) as i64);
    let mut vals = Vec::with_capacity(9);
    for dr in -1..=1i64 {
        for dc in -1..=1i64 {
            let rr = (r + dr).clamp(0, height as i64 - 1) as usize;
            let cc = (c + dc).clamp(0, width as i64 - 1) as usize;
            vals.push(pixels[rr * width + cc] as f64);
        }
    }
    let mean = vals.iter().sum::<f64>() / 9.0;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 9.0;
    1.0 / (1.0 + var.sqrt())
}

/// Minimum syndrome cost of `payload` with blocks of 8 keyed positions and
/// the counting 4x8 matrix; weights and block costs recomputed from scratch.
pub fn stc_cost(
    pixels: &[u8],
    width: usize,
    height: usize,
    path: &[usize],
    payload: &[bool],
) -> f64 {
    let columns: Vec<u16> = (1..=8).collect();
    let blocks = payload.len().div_ceil(4);
    (0..blocks)
        .map(|b| {
            let pos = &path[b * 8..b * 8 + 8];
            let cover: Vec<bool> = pos.iter().map(|&p| pixels[p] & 1 == 1).collect();
            let w: Vec<f64> = pos
                .iter()
                .map(|&p| texture_weight(pixels, width, height, p))
                .collect();
            let target = (0..4).fold(0u16, |t, r| {
                let i = b * 4 + r;
                t << 1 | (i < payload.len() && payload[i]) as u16
            });
            block_brute(&cover, &w, target, &columns).0
        })
        .sum()
}
