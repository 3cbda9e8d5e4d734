//! Deterministic randomness.
//!
//! Every random quantity in the crate (cover pixels, messages, candidate masks,
//! keyed embedding paths, per-run seeds) is drawn from a splitmix64 stream, so
//! a seed fully determines every output on any platform.

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::lsb::PositionList;

/// Golden-ratio increment of splitmix64.
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 generator state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngState {
    pub state: u64,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform real in `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        u64_to_unit(self.next_u64())
    }

    /// Standard normal deviate by the Box-Muller cosine branch. Each call
    /// consumes exactly two `next_f64` draws.
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        // 1 - u1 lies in (0, 1], so the logarithm is finite.
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// Pure-function form of one splitmix64 step.
pub fn next_u64(st: RngState) -> (u64, RngState) {
    let mut st = st;
    let v = st.next_u64();
    (v, st)
}

pub fn next_f64(st: RngState) -> (f64, RngState) {
    let mut st = st;
    let v = st.next_f64();
    (v, st)
}

#[inline]
pub fn u64_to_unit(v: u64) -> f64 {
    (v >> 11) as f64 / (1u64 << 53) as f64
}

/// Seed of the sub-stream `index` hanging off `base`.
///
/// `(index + 1)` is multiplied by the golden gamma so index 0 never collapses
/// onto the base seed itself.
#[inline]
pub fn stream_seed(base: u64, index: u64) -> u64 {
    base ^ index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)
}

/// `n` bits taken LSB-first from successive words of the splitmix64 stream
/// seeded at `seed`.
pub fn stream_bits(seed: u64, n: usize) -> BitVec {
    let mut st = RngState::new(seed);
    let mut bits = Vec::with_capacity(n);
    let mut word = 0u64;
    for t in 0..n {
        if t % 64 == 0 {
            word = st.next_u64();
        }
        bits.push((word >> (t % 64)) & 1 == 1);
    }
    BitVec::from(bits)
}

/// Candidate mask `r_h` of length `n` for a shaping session.
pub fn mask_bits(session_seed: u64, h: u64, n: usize) -> BitVec {
    stream_bits(stream_seed(session_seed, h), n)
}

/// First `len` positions of a partial Fisher-Yates shuffle of `0..pixels`.
pub fn keyed_path(key: u64, pixels: usize, len: usize) -> Result<PositionList> {
    if len > pixels {
        return Err(Error::PathTooLong {
            requested: len,
            available: pixels,
        });
    }
    let mut st = RngState::new(key);
    let mut idx: Vec<usize> = (0..pixels).collect();
    for i in 0..len {
        let span = (pixels - i) as u64;
        let j = i + (st.next_u64() % span) as usize;
        idx.swap(i, j);
    }
    idx.truncate(len);
    Ok(PositionList::from_unchecked(idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn splitmix_reference_trace() {
        let (v, _) = next_u64(RngState::new(0));
        assert_eq!(v, 0xE220_A839_7B1D_CDAF);
        let (w, _) = next_u64(RngState::new(1));
        assert_eq!(w, 0x910A_2DEC_8902_5CC1);
        assert_ne!(v, w);
    }

    #[test]
    fn equal_seeds_equal_prefixes() {
        let mut a = RngState::new(0xDEAD_BEEF);
        let mut b = RngState::new(0xDEAD_BEEF);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn unit_interval_endpoints() {
        assert_eq!(u64_to_unit(0), 0.0);
        let top = u64_to_unit(u64::MAX);
        assert_eq!(top, ((1u64 << 53) - 1) as f64 / (1u64 << 53) as f64);
        assert!(top < 1.0);
    }

    #[test]
    fn unit_mean_converges() {
        let mut st = RngState::new(42);
        let mean = (0..100_000).map(|_| st.next_f64()).sum::<f64>() / 100_000.0;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn mask_known_word() {
        // splitmix64(7 ^ 4*gamma), first output, computed outside the crate.
        let word: u64 = 0xB4A0_472E_5780_69AE;
        let m = mask_bits(7, 3, 64);
        assert_eq!(m.len(), 64);
        for t in 0..64 {
            assert_eq!(m.get(t), (word >> t) & 1 == 1, "bit {t}");
        }
        assert!(mask_bits(7, 3, 0).is_empty());
    }

    #[test]
    fn keyed_path_edges() {
        assert!(keyed_path(9, 5, 0).unwrap().is_empty());
        assert_eq!(keyed_path(9, 1, 1).unwrap().as_slice(), &[0]);
        let mut full = keyed_path(9, 10, 10).unwrap().as_slice().to_vec();
        full.sort_unstable();
        assert_eq!(full, (0..10).collect::<Vec<_>>());
        assert!(matches!(
            keyed_path(9, 4, 5),
            Err(Error::PathTooLong { .. })
        ));
    }

    proptest! {
        #[test]
        fn mask_prefix_property(seed: u64, h in 0u64..1 << 20, n in 0usize..300, extra in 0usize..200) {
            let short = mask_bits(seed, h, n);
            let long = mask_bits(seed, h, n + extra);
            prop_assert_eq!(short.as_slice(), &long.as_slice()[..n]);
        }

        #[test]
        fn keyed_path_distinct(key: u64, m in 0usize..10_000, frac in 0.0f64..=1.0) {
            let l = ((m as f64) * frac) as usize;
            let path = keyed_path(key, m, l).unwrap();
            prop_assert_eq!(path.len(), l);
            let mut seen = vec![false; m];
            for &p in path.as_slice() {
                prop_assert!(p < m);
                prop_assert!(!seen[p]);
                seen[p] = true;
            }
        }
    }
}
