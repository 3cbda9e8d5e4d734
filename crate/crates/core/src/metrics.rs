//! Smoothed intensity distributions and the distances used to compare cover
//! and stego images. All logarithms are base 2.

use crate::error::{Error, Result};
use crate::imaging::{Cooc256, Counts256};

/// Pseudo-count added to every histogram bin before normalisation.
pub const SMOOTHING_EPS: f64 = 1e-3;

/// Strictly positive probability vector over the 256 intensities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dist256(pub [f64; 256]);

impl Dist256 {
    /// Wraps raw probabilities without smoothing. The caller guarantees the
    /// values form a distribution.
    pub fn from_probs(p: [f64; 256]) -> Self {
        Self(p)
    }

    pub fn probs(&self) -> &[f64; 256] {
        &self.0
    }
}

pub fn smooth_normalize(c: &Counts256) -> Result<Dist256> {
    smooth_normalize_eps(c, SMOOTHING_EPS)
}

pub fn smooth_normalize_eps(c: &Counts256, eps: f64) -> Result<Dist256> {
    let total = c.total();
    if total == 0 {
        return Err(Error::EmptyDistribution);
    }
    let denom = total as f64 + 256.0 * eps;
    let mut p = [0.0; 256];
    for (dst, &n) in p.iter_mut().zip(c.0.iter()) {
        *dst = (n as f64 + eps) / denom;
    }
    Ok(Dist256(p))
}

/// `D_KL(p || q)` in bits. Zero-probability terms of `p` contribute nothing.
pub fn kl_div(p: &Dist256, q: &Dist256) -> f64 {
    let mut acc = 0.0;
    for (&pv, &qv) in p.0.iter().zip(q.0.iter()) {
        if pv > 0.0 {
            acc += pv * (pv / qv).log2();
        }
    }
    acc.max(0.0)
}

pub fn js_div(p: &Dist256, q: &Dist256) -> f64 {
    let mut m = [0.0; 256];
    for (v, mv) in m.iter_mut().enumerate() {
        *mv = 0.5 * (p.0[v] + q.0[v]);
    }
    let m = Dist256(m);
    (0.5 * kl_div(p, &m) + 0.5 * kl_div(q, &m)).clamp(0.0, 1.0)
}

pub fn tv_dist(p: &Dist256, q: &Dist256) -> f64 {
    0.5 * p
        .0
        .iter()
        .zip(q.0.iter())
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
}

/// Symmetric chi-square distance, with `0/0` terms taken as zero.
pub fn chi2_sym(p: &Dist256, q: &Dist256) -> f64 {
    p.0.iter()
        .zip(q.0.iter())
        .map(|(&a, &b)| {
            let s = a + b;
            if s == 0.0 {
                0.0
            } else {
                (a - b) * (a - b) / s
            }
        })
        .sum()
}

/// L1 distance between the normalised co-occurrence matrices.
pub fn cooc_l1(a: &Cooc256, b: &Cooc256) -> Result<f64> {
    let (ta, tb) = (a.total(), b.total());
    if ta == 0 || tb == 0 {
        return Err(Error::EmptyDistribution);
    }
    let (ta, tb) = (ta as f64, tb as f64);
    Ok(a.cells()
        .iter()
        .zip(b.cells())
        .filter(|(x, y)| **x != 0 || **y != 0)
        .map(|(&x, &y)| (x as f64 / ta - y as f64 / tb).abs())
        .sum())
}

/// `(base - sst) / base`; negative when the shaped arm is worse.
pub fn relative_gain(base: f64, sst: f64) -> Result<f64> {
    if base.is_nan() || base <= 0.0 {
        return Err(Error::DegenerateBaseline(base));
    }
    Ok((base - sst) / base)
}

/// Cover-vs-stego distances under every metric the harness reports.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricSet {
    pub kl: f64,
    pub js: f64,
    pub tv: f64,
    pub chi2: f64,
    pub cooc_l1: f64,
}

impl MetricSet {
    pub fn between(
        cover: &Dist256,
        cover_cooc: &Cooc256,
        stego: &Dist256,
        stego_cooc: &Cooc256,
    ) -> Result<Self> {
        Ok(Self {
            kl: kl_div(cover, stego),
            js: js_div(cover, stego),
            tv: tv_dist(cover, stego),
            chi2: chi2_sym(cover, stego),
            cooc_l1: cooc_l1(cover_cooc, stego_cooc)?,
        })
    }
}
