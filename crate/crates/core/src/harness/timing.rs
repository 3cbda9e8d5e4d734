use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::campaign::{derive_run_seed, round3, RunSeeds};
use crate::error::{Error, Result};
use crate::imaging::{generate_cover, CoverModel};
use crate::rng::{keyed_path, stream_bits, RngState};
use crate::shaping::{shape_select_kl, ShapingConfig, MAX_OVERHEAD};

#[derive(Debug, Clone, PartialEq)]
pub struct TimingConfig {
    pub overheads: Vec<u32>,
    pub n: usize,
    pub width: usize,
    pub height: usize,
    pub models: Vec<CoverModel>,
    /// Minimum searches per (K, model).
    pub repetitions: usize,
    /// Lower bound on candidates evaluated per (K, model); small K get extra
    /// repetitions until it is met.
    pub min_candidates: u64,
    pub master_seed: u64,
}

impl TimingConfig {
    /// The standard grid `{0, 4, 8, 10, 12}` cut at `kmax`, plus `kmax`.
    pub fn up_to(kmax: u32) -> Self {
        let mut overheads: Vec<u32> = [0, 4, 8, 10, 12]
            .into_iter()
            .filter(|&k| k <= kmax)
            .collect();
        if !overheads.contains(&kmax) {
            overheads.push(kmax);
        }
        Self {
            overheads,
            ..Self::default()
        }
    }

    fn reps_for(&self, k: u32) -> usize {
        let by_candidates = self.min_candidates.div_ceil(1u64 << k) as usize;
        self.repetitions.max(by_candidates)
    }
}

impl Default for TimingConfig {
    fn default() -> Self {
        Self {
            overheads: vec![0, 4, 8, 10, 12],
            n: 1000,
            width: 100,
            height: 100,
            models: vec![CoverModel::Smooth, CoverModel::Bimodal],
            repetitions: 5,
            min_candidates: 4096,
            master_seed: 7,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub k: u32,
    pub configurations: u64,
    pub runs: usize,
    pub mean_search_ms: f64,
    pub mean_us_per_candidate: f64,
}

/// Wall-clock cost of exhaustive KL shaping on keyed paths. Covers and
/// messages are prepared outside the timed region.
pub fn timing_study(cfg: &TimingConfig) -> Result<Vec<TimingRow>> {
    if let Some(&k) = cfg.overheads.iter().find(|&&k| k > MAX_OVERHEAD) {
        return Err(Error::OverheadTooLarge(k));
    }
    if cfg.n + cfg.overheads.iter().copied().max().unwrap_or(0) as usize > cfg.width * cfg.height {
        return Err(Error::Config(
            "timing payload does not fit the cover".into(),
        ));
    }
    // One pool of prepared inputs per model; small K cycle through it.
    let pool_size = cfg.repetitions.max(1);
    let mut pools = Vec::with_capacity(cfg.models.len());
    for (mi, &model) in cfg.models.iter().enumerate() {
        let mut pool = Vec::with_capacity(pool_size);
        for rep in 0..pool_size {
            let seeds = RunSeeds::from_run_seed(derive_run_seed(
                cfg.master_seed,
                (mi * pool_size + rep) as u64,
            ));
            let cover = generate_cover(
                model,
                cfg.width,
                cfg.height,
                &mut RngState::new(seeds.cover),
            )?;
            pool.push((cover, stream_bits(seeds.message, cfg.n), seeds));
        }
        pools.push(pool);
    }

    let mut rows = Vec::with_capacity(cfg.overheads.len());
    for &k in &cfg.overheads {
        let reps = cfg.reps_for(k);
        let mut total = 0.0;
        let mut runs = 0;
        for pool in &pools {
            let prepared = pool
                .iter()
                .map(|(cover, _, seeds)| {
                    keyed_path(seeds.path_key, cover.len(), cfg.n + k as usize)
                })
                .collect::<Result<Vec<_>>>()?;
            for rep in 0..reps {
                let (cover, message, seeds) = &pool[rep % pool_size];
                let path = &prepared[rep % pool_size];
                let shaping = ShapingConfig::new(k, seeds.session);
                if rep == 0 {
                    // warm-up, untimed
                    shape_select_kl(cover, message, &shaping, path)?;
                }
                let started = Instant::now();
                let result = shape_select_kl(cover, message, &shaping, path)?;
                total += started.elapsed().as_secs_f64();
                std::hint::black_box(result);
                runs += 1;
            }
        }
        let mean_s = total / runs as f64;
        rows.push(TimingRow {
            k,
            configurations: 1u64 << k,
            runs,
            mean_search_ms: round3(mean_s * 1e3),
            mean_us_per_candidate: round3(mean_s * 1e6 / (1u64 << k) as f64),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_selection() {
        assert_eq!(TimingConfig::up_to(12).overheads, vec![0, 4, 8, 10, 12]);
        assert_eq!(TimingConfig::up_to(9).overheads, vec![0, 4, 8, 9]);
        let cfg = TimingConfig::default();
        assert_eq!(cfg.reps_for(0), 4096);
        assert_eq!(cfg.reps_for(8), 16);
        assert_eq!(cfg.reps_for(12), 5);
    }

    #[test]
    fn small_study_counts() {
        let cfg = TimingConfig {
            overheads: vec![0, 3],
            n: 100,
            width: 20,
            height: 20,
            repetitions: 2,
            min_candidates: 1,
            ..TimingConfig::default()
        };
        let rows = timing_study(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].configurations, 8);
        assert_eq!(rows[1].runs, 4);
        assert!(rows.iter().all(|r| r.mean_search_ms >= 0.0));
    }
}
