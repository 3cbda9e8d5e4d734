//! Matrix-embedding cost simulation.
//!
//! Selected pixels (a keyed path) contribute their LSBs as cover bits. The
//! path is cut into blocks of `n` positions; each block carries `m` payload
//! bits as the syndrome `H * (c XOR f)` of its cover bits `c` under flips `f`.
//! A dynamic program over the `2^m` partial syndromes finds the cheapest flip
//! set per block, where flipping a pixel costs a weight derived from its local
//! texture. No stego image is produced; only the cost is of interest.

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::imaging::Image;
use crate::lsb::PositionList;
use crate::rng::keyed_path;
use crate::shaping::{search_candidates, Objective, ObjectiveKind, ShapingConfig};

/// Binary `m x n` parity-check matrix stored column-wise; bit `m-1-r` of a
/// column is row `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckMatrix {
    rows: usize,
    columns: Vec<u16>,
}

impl CheckMatrix {
    pub fn new(rows: usize, columns: Vec<u16>) -> Result<Self> {
        if rows == 0 || rows > 8 {
            return Err(Error::Config(format!(
                "syndrome width {rows} outside 1..=8"
            )));
        }
        if columns.is_empty() || columns.len() > 16 {
            return Err(Error::Config(format!(
                "block width {} outside 1..=16",
                columns.len()
            )));
        }
        if columns.iter().any(|&c| c >> rows != 0) {
            return Err(Error::Config("column wider than the syndrome".into()));
        }
        let h = Self { rows, columns };
        if h.rank() < rows {
            return Err(Error::Config(
                "check matrix columns do not span every syndrome".into(),
            ));
        }
        Ok(h)
    }

    /// Columns `1..=n` written as `m`-bit integers.
    pub fn counting(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, (1..=cols as u16).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[u16] {
        &self.columns
    }

    pub fn syndrome(&self, bits: &[bool]) -> u16 {
        bits.iter()
            .zip(&self.columns)
            .filter(|(b, _)| **b)
            .fold(0, |s, (_, &c)| s ^ c)
    }

    fn rank(&self) -> usize {
        let mut basis = [0u16; 16];
        let mut rank = 0;
        for &c in &self.columns {
            let mut v = c;
            for bit in (0..16).rev() {
                if v >> bit & 1 == 0 {
                    continue;
                }
                if basis[bit] == 0 {
                    basis[bit] = v;
                    rank += 1;
                    break;
                }
                v ^= basis[bit];
            }
        }
        rank
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StcConfig {
    pub matrix: CheckMatrix,
    pub key: u64,
}

impl StcConfig {
    /// `n = 8`, `m = 4`, column `j` equal to `j + 1`.
    pub fn standard(key: u64) -> Self {
        Self {
            matrix: CheckMatrix::counting(4, 8).expect("standard matrix is valid"),
            key,
        }
    }

    pub fn block_bits(&self) -> usize {
        self.matrix.cols()
    }

    pub fn syndrome_bits(&self) -> usize {
        self.matrix.rows()
    }

    pub fn blocks_for(&self, payload_len: usize) -> usize {
        payload_len.div_ceil(self.syndrome_bits())
    }

    pub fn positions_for(&self, payload_len: usize) -> usize {
        self.blocks_for(payload_len) * self.block_bits()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StcOutcome {
    pub total_cost: f64,
    pub flips: PositionList,
    pub chosen_h: u64,
    pub blocks: usize,
}

/// `1 / (1 + sigma)` with `sigma` the population standard deviation of the
/// edge-replicated 3x3 neighbourhood.
pub fn local_weights(img: &Image, positions: &PositionList) -> Vec<f64> {
    let w = img.width() as isize;
    positions
        .as_slice()
        .iter()
        .map(|&p| {
            let (r, c) = (p as isize / w, p as isize % w);
            let mut sum = 0.0;
            let mut sq = 0.0;
            for dr in -1..=1 {
                for dc in -1..=1 {
                    let v = img.at_clamped(r + dr, c + dc) as f64;
                    sum += v;
                    sq += v * v;
                }
            }
            let mean = sum / 9.0;
            let var = (sq / 9.0 - mean * mean).max(0.0);
            1.0 / (1.0 + var.sqrt())
        })
        .collect()
}

/// Cheapest flip set `f` with `H (c XOR f) = target`.
///
/// Returns the cost and the flip set as a bitmask over block columns (bit `j`
/// set means column `j` flips). Among equal-cost flip sets the one that is
/// lexicographically smallest as a vector `(f_0, f_1, ...)` wins.
pub fn block_min_cost(cover: &[bool], weights: &[f64], target: u16, h: &CheckMatrix) -> (f64, u16) {
    let n = h.cols();
    assert_eq!(cover.len(), n, "cover block width");
    assert_eq!(weights.len(), n, "weight block width");
    let states = 1usize << h.rows();
    assert!((target as usize) < states, "target wider than the syndrome");

    // to_go[j][s]: cheapest completion from column j in partial syndrome s.
    let mut to_go = vec![f64::INFINITY; (n + 1) * states];
    to_go[n * states + target as usize] = 0.0;
    for j in (0..n).rev() {
        let col = h.columns()[j] as usize;
        for s in 0..states {
            let keep = to_go[(j + 1) * states + s];
            let flip = weights[j] + to_go[(j + 1) * states + (s ^ col)];
            to_go[j * states + s] = keep.min(flip);
        }
    }

    let start = h.syndrome(cover) as usize;
    let cost = to_go[start];
    assert!(cost.is_finite(), "target syndrome unreachable");

    let mut flips = 0u16;
    let mut s = start;
    for j in 0..n {
        let col = h.columns()[j] as usize;
        let keep = to_go[(j + 1) * states + s];
        let flip = weights[j] + to_go[(j + 1) * states + (s ^ col)];
        if flip < keep {
            flips |= 1 << j;
            s ^= col;
        }
    }
    debug_assert_eq!(s, target as usize);
    (cost, flips)
}

/// Block `b`'s target syndrome, zero-padded past the end of the payload.
fn block_target(payload: &BitVec, b: usize, m: usize) -> u16 {
    (0..m).fold(0u16, |t, r| {
        let i = b * m + r;
        (t << 1) | (i < payload.len() && payload.get(i)) as u16
    })
}

/// Keyed positions, their weights and LSBs for a payload of `payload_len` bits.
struct BlockLayout {
    path: PositionList,
    weights: Vec<f64>,
    cover_bits: Vec<bool>,
    blocks: usize,
}

impl BlockLayout {
    fn new(img: &Image, cfg: &StcConfig, payload_len: usize) -> Result<Self> {
        let needed = cfg.positions_for(payload_len);
        if needed > img.len() {
            return Err(Error::InsufficientPixels {
                needed,
                available: img.len(),
            });
        }
        let path = keyed_path(cfg.key, img.len(), needed)?;
        let weights = local_weights(img, &path);
        let px = img.pixels();
        let cover_bits = path.as_slice().iter().map(|&p| px[p] & 1 == 1).collect();
        Ok(Self {
            path,
            weights,
            cover_bits,
            blocks: cfg.blocks_for(payload_len),
        })
    }

    fn block(&self, b: usize, n: usize) -> (&[bool], &[f64]) {
        let r = b * n..(b + 1) * n;
        (&self.cover_bits[r.clone()], &self.weights[r])
    }
}

pub fn stc_total_cost(img: &Image, cfg: &StcConfig, payload: &BitVec) -> Result<StcOutcome> {
    let layout = BlockLayout::new(img, cfg, payload.len())?;
    Ok(realize(&layout, cfg, payload))
}

fn realize(layout: &BlockLayout, cfg: &StcConfig, payload: &BitVec) -> StcOutcome {
    let (n, m) = (cfg.block_bits(), cfg.syndrome_bits());
    let mut total_cost = 0.0;
    let mut flips = Vec::new();
    for b in 0..layout.blocks {
        let (c, w) = layout.block(b, n);
        let (cost, mask) = block_min_cost(c, w, block_target(payload, b, m), &cfg.matrix);
        total_cost += cost;
        flips.extend(
            (0..n)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| layout.path.as_slice()[b * n + j]),
        );
    }
    StcOutcome {
        total_cost,
        flips: PositionList::from_unchecked(flips),
        chosen_h: 0,
        blocks: layout.blocks,
    }
}

/// Minimum total flip cost as a shaping objective. The per-block cost of all
/// `2^m` targets is tabulated once, so scoring a candidate is one table
/// lookup per block.
pub struct SyndromeCostObjective {
    payload_len: usize,
    syndrome_bits: usize,
    tables: Vec<Vec<f64>>,
}

impl SyndromeCostObjective {
    pub fn new(img: &Image, cfg: &StcConfig, payload_len: usize) -> Result<Self> {
        let layout = BlockLayout::new(img, cfg, payload_len)?;
        Ok(Self::from_layout(&layout, cfg, payload_len))
    }

    fn from_layout(layout: &BlockLayout, cfg: &StcConfig, payload_len: usize) -> Self {
        let n = cfg.block_bits();
        let states = 1u16 << cfg.syndrome_bits();
        let tables = (0..layout.blocks)
            .map(|b| {
                let (c, w) = layout.block(b, n);
                (0..states)
                    .map(|t| block_min_cost(c, w, t, &cfg.matrix).0)
                    .collect()
            })
            .collect();
        Self {
            payload_len,
            syndrome_bits: cfg.syndrome_bits(),
            tables,
        }
    }
}

impl Objective for SyndromeCostObjective {
    fn evaluate(&self, payload: &BitVec) -> Result<f64> {
        if payload.len() != self.payload_len {
            return Err(Error::Config(format!(
                "objective prepared for {} bits, got {}",
                self.payload_len,
                payload.len()
            )));
        }
        Ok(self
            .tables
            .iter()
            .enumerate()
            .map(|(b, table)| table[block_target(payload, b, self.syndrome_bits) as usize])
            .sum())
    }
}

/// Exhaustive shaping in front of the syndrome embedder: the candidate with
/// the smallest total flip cost wins.
pub fn stc_shape_select(
    img: &Image,
    s: &BitVec,
    shaping: &ShapingConfig,
    cfg: &StcConfig,
) -> Result<StcOutcome> {
    shaping.validate()?;
    let shaping = ShapingConfig {
        objective: ObjectiveKind::SyndromeCost,
        ..*shaping
    };
    let payload_len = s.len() + shaping.k as usize;
    let layout = BlockLayout::new(img, cfg, payload_len)?;
    let objective = SyndromeCostObjective::from_layout(&layout, cfg, payload_len);
    let found = search_candidates(s, &shaping, &objective)?;
    let mut outcome = realize(&layout, cfg, &found.payload);
    outcome.chosen_h = found.chosen_h;
    Ok(outcome)
}
