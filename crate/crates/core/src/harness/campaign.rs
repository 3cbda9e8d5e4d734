use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{CampaignConfig, PathMode, StcCampaignConfig};
use crate::bits::BitVec;
use crate::error::Result;
use crate::imaging::{
    cooccurrence, generate_cover_with, histogram, CoverModel, CoverParams, Image,
};
use crate::lsb::{embed_lsb, PositionList};
use crate::metrics::{relative_gain, smooth_normalize, MetricSet};
use crate::rng::{keyed_path, stream_bits, stream_seed, RngState};
use crate::shaping::{fair_baseline_payload, shape_select_kl, ShapingConfig};
use crate::stc::{stc_shape_select, StcConfig};

/// Seed of the `ordinal`-th cell of a campaign.
pub fn derive_run_seed(master: u64, ordinal: u64) -> u64 {
    RngState::new(stream_seed(master, ordinal)).next_u64()
}

/// Independent seeds drawn for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSeeds {
    pub cover: u64,
    pub message: u64,
    pub session: u64,
    pub path_key: u64,
}

impl RunSeeds {
    pub fn from_run_seed(run_seed: u64) -> Self {
        let mut st = RngState::new(run_seed);
        Self {
            cover: st.next_u64(),
            message: st.next_u64(),
            session: st.next_u64(),
            path_key: st.next_u64(),
        }
    }
}

/// One LSB shaping run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub model: CoverModel,
    pub n: usize,
    pub k: u32,
    pub repetition: usize,
    pub seed: u64,
    pub path: String,
    pub chosen_h: u64,
    pub base_kl: f64,
    pub base_js: f64,
    pub base_tv: f64,
    pub base_chi2: f64,
    pub base_cooc_l1: f64,
    pub sst_kl: f64,
    pub sst_js: f64,
    pub sst_tv: f64,
    pub sst_chi2: f64,
    pub sst_cooc_l1: f64,
    pub gain_kl: f64,
    pub gain_js: f64,
    pub gain_tv: f64,
    pub gain_chi2: f64,
    pub gain_cooc_l1: f64,
    pub search_ms: f64,
}

#[derive(Debug, Clone, Copy)]
struct RunSpec {
    model: CoverModel,
    n: usize,
    k: u32,
    repetition: usize,
    seed: u64,
}

/// Enumerates runs in (model, N, K, repetition) order. The seed depends on
/// (model, N, repetition) only, so every K of a cell sees the same cover,
/// message, session masks and path key.
fn enumerate<'a>(
    models: &'a [CoverModel],
    lengths: &'a [usize],
    overheads: &'a [u32],
    reps: usize,
    master: u64,
) -> Vec<RunSpec> {
    let mut specs = Vec::new();
    for (mi, &model) in models.iter().enumerate() {
        for (ni, &n) in lengths.iter().enumerate() {
            for &k in overheads {
                for repetition in 0..reps {
                    let cell = ((mi * lengths.len() + ni) * reps + repetition) as u64;
                    specs.push(RunSpec {
                        model,
                        n,
                        k,
                        repetition,
                        seed: derive_run_seed(master, cell),
                    });
                }
            }
        }
    }
    specs
}

fn make_cover(
    spec: &RunSpec,
    seeds: &RunSeeds,
    w: usize,
    h: usize,
    params: &CoverParams,
) -> Result<Image> {
    generate_cover_with(spec.model, w, h, &mut RngState::new(seeds.cover), params)
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let specs = enumerate(
        &cfg.models,
        &cfg.message_lengths,
        &cfg.overheads,
        cfg.repetitions,
        cfg.master_seed,
    );
    specs.par_iter().map(|spec| run_one(cfg, spec)).collect()
}

fn run_one(cfg: &CampaignConfig, spec: &RunSpec) -> Result<RunRecord> {
    let seeds = RunSeeds::from_run_seed(spec.seed);
    let cover = make_cover(spec, &seeds, cfg.width, cfg.height, &cfg.cover_params)?;
    let message = stream_bits(seeds.message, spec.n);
    let len = spec.n + spec.k as usize;
    let path = match cfg.path_mode {
        PathMode::Sequential => PositionList::sequential(len, cover.len())?,
        PathMode::Keyed => keyed_path(seeds.path_key, cover.len(), len)?,
    };

    let base_stego = embed_lsb(&cover, &fair_baseline_payload(&message, spec.k), &path)?;

    let shaping = ShapingConfig {
        objective: cfg.objective,
        ..ShapingConfig::new(spec.k, seeds.session)
    };
    let started = Instant::now();
    let shaped = shape_select_kl(&cover, &message, &shaping, &path)?;
    let elapsed = started.elapsed();

    let p = smooth_normalize(&histogram(&cover))?;
    let cover_cooc = cooccurrence(&cover)?;
    let measure = |stego: &Image| -> Result<MetricSet> {
        MetricSet::between(
            &p,
            &cover_cooc,
            &smooth_normalize(&histogram(stego))?,
            &cooccurrence(stego)?,
        )
    };
    let base = measure(&base_stego)?;
    let sst = measure(&shaped.stego)?;
    debug_assert_eq!(sst.kl, shaped.objective_value);
    debug_assert_eq!(
        sst.kl,
        shaped
            .per_candidate
            .iter()
            .map(|c| c.1)
            .fold(f64::INFINITY, f64::min)
    );

    Ok(RunRecord {
        model: spec.model,
        n: spec.n,
        k: spec.k,
        repetition: spec.repetition,
        seed: spec.seed,
        path: cfg.path_mode.name().to_string(),
        chosen_h: shaped.chosen_h,
        base_kl: base.kl,
        base_js: base.js,
        base_tv: base.tv,
        base_chi2: base.chi2,
        base_cooc_l1: base.cooc_l1,
        sst_kl: sst.kl,
        sst_js: sst.js,
        sst_tv: sst.tv,
        sst_chi2: sst.chi2,
        sst_cooc_l1: sst.cooc_l1,
        gain_kl: relative_gain(base.kl, sst.kl)?,
        gain_js: relative_gain(base.js, sst.js)?,
        gain_tv: relative_gain(base.tv, sst.tv)?,
        gain_chi2: relative_gain(base.chi2, sst.chi2)?,
        gain_cooc_l1: relative_gain(base.cooc_l1, sst.cooc_l1)?,
        search_ms: if cfg.record_timing {
            round3(elapsed.as_secs_f64() * 1e3)
        } else {
            0.0
        },
    })
}

pub(crate) fn round3(v: f64) -> f64 {
    (v * 1e3).round() / 1e3
}

/// One syndrome-cost shaping run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StcRecord {
    pub model: CoverModel,
    pub n: usize,
    pub k: u32,
    pub repetition: usize,
    pub seed: u64,
    pub candidates: u64,
    pub blocks: usize,
    pub flips: usize,
    pub chosen_h: u64,
    pub min_cost: f64,
}

pub fn run_stc_campaign(cfg: &StcCampaignConfig) -> Result<Vec<StcRecord>> {
    cfg.validate()?;
    let specs = enumerate(
        &cfg.models,
        &cfg.message_lengths,
        &cfg.overheads,
        cfg.repetitions,
        cfg.master_seed,
    );
    specs
        .par_iter()
        .map(|spec| {
            let seeds = RunSeeds::from_run_seed(spec.seed);
            let cover = make_cover(spec, &seeds, cfg.width, cfg.height, &cfg.cover_params)?;
            let message: BitVec = stream_bits(seeds.message, spec.n);
            let shaping = ShapingConfig::new(spec.k, seeds.session);
            let out = stc_shape_select(
                &cover,
                &message,
                &shaping,
                &StcConfig::standard(seeds.path_key),
            )?;
            Ok(StcRecord {
                model: spec.model,
                n: spec.n,
                k: spec.k,
                repetition: spec.repetition,
                seed: spec.seed,
                candidates: shaping.candidates(),
                blocks: out.blocks,
                flips: out.flips.len(),
                chosen_h: out.chosen_h,
                min_cost: out.total_cost,
            })
        })
        .collect()
}
