//! Reversible payload shaping.
//!
//! A shaping overhead `K` defines `2^K` equivalent representations of a
//! message `s`: candidate `h` is `bin_K(h) || (s XOR r_h)`, where `r_h` is the
//! deterministic session mask for index `h`. Every candidate is passed through
//! the same embedder, scored by an [`Objective`], and the lowest-scoring one is
//! kept. The receiver reads the `K` index bits, regenerates `r_h` and undoes
//! the XOR.
//!
//! With `K = 0` the family holds only the message itself (no index, no mask),
//! which is exactly the fair baseline payload.

use rayon::prelude::*;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::imaging::{histogram, Counts256, Image};
use crate::lsb::{embed_lsb, lsb_set, PositionList};
use crate::metrics::{kl_div, smooth_normalize, Dist256};
use crate::rng::mask_bits;

/// Largest supported shaping overhead; `2^24` candidates.
pub const MAX_OVERHEAD: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    /// KL divergence between cover and LSB-stego intensity histograms.
    KlHistogram,
    /// Minimum weighted flip cost of the syndrome embedder.
    SyndromeCost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapingConfig {
    pub k: u32,
    pub session_seed: u64,
    pub objective: ObjectiveKind,
}

impl ShapingConfig {
    pub fn new(k: u32, session_seed: u64) -> Self {
        Self {
            k,
            session_seed,
            objective: ObjectiveKind::KlHistogram,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k > MAX_OVERHEAD {
            return Err(Error::OverheadTooLarge(self.k));
        }
        Ok(())
    }

    pub fn candidates(&self) -> u64 {
        1u64 << self.k
    }
}

/// Scores one candidate payload. Lower is better.
pub trait Objective {
    fn evaluate(&self, payload: &BitVec) -> Result<f64>;
}

impl<F> Objective for F
where
    F: Fn(&BitVec) -> Result<f64>,
{
    fn evaluate(&self, payload: &BitVec) -> Result<f64> {
        self(payload)
    }
}

/// `D_KL(P || Q_h)` of the LSB stego produced by embedding a payload along a
/// fixed path. Only the path pixels are revisited per candidate; the stego
/// histogram is the cover histogram adjusted for the pixels whose LSB flips.
pub struct KlObjective<'a> {
    cover: &'a Image,
    path: &'a PositionList,
    cover_counts: Counts256,
    cover_dist: Dist256,
}

impl<'a> KlObjective<'a> {
    pub fn new(cover: &'a Image, path: &'a PositionList) -> Result<Self> {
        let cover_counts = histogram(cover);
        let cover_dist = smooth_normalize(&cover_counts)?;
        Ok(Self {
            cover,
            path,
            cover_counts,
            cover_dist,
        })
    }

    pub fn cover_dist(&self) -> &Dist256 {
        &self.cover_dist
    }
}

impl Objective for KlObjective<'_> {
    fn evaluate(&self, payload: &BitVec) -> Result<f64> {
        if payload.len() > self.path.len() {
            return Err(Error::PayloadTooLong {
                payload: payload.len(),
                path: self.path.len(),
            });
        }
        let px = self.cover.pixels();
        let mut counts = self.cover_counts;
        for (bit, &pos) in payload.iter().zip(self.path.as_slice()) {
            let old = px[pos];
            let new = lsb_set(old, bit);
            if new != old {
                counts.0[old as usize] -= 1;
                counts.0[new as usize] += 1;
            }
        }
        Ok(kl_div(&self.cover_dist, &smooth_normalize(&counts)?))
    }
}

/// `K`-bit big-endian representation of `h`.
pub fn bin_index(h: u64, k: u32) -> Result<BitVec> {
    if k > MAX_OVERHEAD {
        return Err(Error::OverheadTooLarge(k));
    }
    if h >= 1u64 << k {
        return Err(Error::IndexOutOfRange { h, k });
    }
    Ok((0..k).rev().map(|b| (h >> b) & 1 == 1).collect())
}

pub fn build_payload(h: u64, s: &BitVec, cfg: &ShapingConfig) -> Result<BitVec> {
    let mut z = bin_index(h, cfg.k)?;
    if cfg.k == 0 {
        return Ok(s.clone());
    }
    z.extend_from(&(s ^ &mask_bits(cfg.session_seed, h, s.len())));
    Ok(z)
}

/// `K` zero bits followed by the unmasked message.
pub fn fair_baseline_payload(s: &BitVec, k: u32) -> BitVec {
    let mut z = BitVec::zeros(k as usize);
    z.extend_from(s);
    z
}

/// Inverse of [`build_payload`]: returns `(h, s)`.
pub fn decode_payload(z: &BitVec, k: u32, session_seed: u64) -> Result<(u64, BitVec)> {
    if k > MAX_OVERHEAD {
        return Err(Error::OverheadTooLarge(k));
    }
    let k_len = k as usize;
    if z.len() < k_len {
        return Err(Error::PayloadTooShort { len: z.len(), k });
    }
    if k == 0 {
        return Ok((0, z.clone()));
    }
    let h = z
        .iter()
        .take(k_len)
        .fold(0u64, |acc, b| (acc << 1) | b as u64);
    let body = z.slice(k_len..z.len());
    let s = &body ^ &mask_bits(session_seed, h, body.len());
    Ok((h, s))
}

/// Outcome of an exhaustive candidate search.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSearch {
    pub chosen_h: u64,
    pub payload: BitVec,
    pub objective_value: f64,
    pub per_candidate: Vec<(u64, f64)>,
}

/// Scores every candidate `h in 0..2^K` and keeps the minimiser, smallest `h`
/// on ties.
pub fn search_candidates<O>(
    s: &BitVec,
    cfg: &ShapingConfig,
    objective: &O,
) -> Result<CandidateSearch>
where
    O: Objective + ?Sized,
{
    cfg.validate()?;
    let mut per_candidate = Vec::with_capacity(cfg.candidates() as usize);
    let mut best: Option<(u64, f64, BitVec)> = None;
    for h in 0..cfg.candidates() {
        let z = build_payload(h, s, cfg)?;
        let v = objective.evaluate(&z)?;
        per_candidate.push((h, v));
        if best.as_ref().is_none_or(|(_, bv, _)| v < *bv) {
            best = Some((h, v, z));
        }
    }
    let (chosen_h, objective_value, payload) = best.expect("at least one candidate");
    Ok(CandidateSearch {
        chosen_h,
        payload,
        objective_value,
        per_candidate,
    })
}

/// Parallel form of [`search_candidates`]; identical result regardless of
/// scheduling.
pub fn search_candidates_par<O>(
    s: &BitVec,
    cfg: &ShapingConfig,
    objective: &O,
) -> Result<CandidateSearch>
where
    O: Objective + Sync + ?Sized,
{
    cfg.validate()?;
    let per_candidate = (0..cfg.candidates())
        .into_par_iter()
        .map(|h| Ok((h, objective.evaluate(&build_payload(h, s, cfg)?)?)))
        .collect::<Result<Vec<_>>>()?;
    let &(chosen_h, objective_value) = per_candidate
        .iter()
        .reduce(|a, b| if b.1 < a.1 { b } else { a })
        .expect("at least one candidate");
    Ok(CandidateSearch {
        chosen_h,
        payload: build_payload(chosen_h, s, cfg)?,
        objective_value,
        per_candidate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapingResult {
    pub chosen_h: u64,
    pub payload: BitVec,
    pub stego: Image,
    pub objective_value: f64,
    pub per_candidate: Vec<(u64, f64)>,
}

/// Exhaustive shaping in front of the LSB embedder.
pub fn shape_select<O>(
    cover: &Image,
    s: &BitVec,
    cfg: &ShapingConfig,
    path: &PositionList,
    objective: &O,
) -> Result<ShapingResult>
where
    O: Objective + ?Sized,
{
    cfg.validate()?;
    let need = s.len() + cfg.k as usize;
    if path.len() < need {
        return Err(Error::PayloadTooLong {
            payload: need,
            path: path.len(),
        });
    }
    let found = search_candidates(s, cfg, objective)?;
    let stego = embed_lsb(cover, &found.payload, path)?;
    Ok(ShapingResult {
        chosen_h: found.chosen_h,
        payload: found.payload,
        stego,
        objective_value: found.objective_value,
        per_candidate: found.per_candidate,
    })
}

/// [`shape_select`] under the histogram KL objective.
pub fn shape_select_kl(
    cover: &Image,
    s: &BitVec,
    cfg: &ShapingConfig,
    path: &PositionList,
) -> Result<ShapingResult> {
    let objective = KlObjective::new(cover, path)?;
    shape_select(cover, s, cfg, path, &objective)
}

/// Mean of `h / (2^K - 1)` and the share of the most frequently chosen index.
pub fn index_stat(chosen: &[u64], k: u32) -> Result<(f64, f64)> {
    if k == 0 {
        return Err(Error::Config("index statistics need K >= 1".into()));
    }
    if k > MAX_OVERHEAD {
        return Err(Error::OverheadTooLarge(k));
    }
    if chosen.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let top = ((1u64 << k) - 1) as f64;
    let mut buckets = std::collections::HashMap::new();
    let mut sum = 0.0;
    for &h in chosen {
        sum += h as f64 / top;
        *buckets.entry(h).or_insert(0usize) += 1;
    }
    let largest = buckets.values().copied().max().unwrap_or(0);
    let n = chosen.len() as f64;
    Ok((sum / n, largest as f64 / n))
}
