//! Flat `key = value` configuration files.
//!
//! One assignment per line; `#` starts a comment; lists are comma separated.
//! Every key must be recognised by the consumer, so typos surface as errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::imaging::{CoverModel, CoverParams};
use crate::shaping::{ObjectiveKind, MAX_OVERHEAD};

#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    entries: BTreeMap<String, String>,
    used: std::collections::BTreeSet<String>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim().to_ascii_lowercase();
            if key.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
            }
            if entries
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(Error::Config(format!(
                    "line {}: duplicate key {key:?}",
                    lineno + 1
                )));
            }
        }
        Ok(Self {
            entries,
            used: Default::default(),
        })
    }

    fn raw(&mut self, key: &str) -> Option<String> {
        let v = self.entries.get(key).cloned();
        if v.is_some() {
            self.used.insert(key.to_string());
        }
        v
    }

    pub fn get<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| Error::Config(format!("bad value {v:?} for {key}")))
            })
            .transpose()
    }

    pub fn get_or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|item| {
                        item.parse::<T>()
                            .map_err(|_| Error::Config(format!("bad list item {item:?} for {key}")))
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn seed(&mut self, key: &str, default: u64) -> Result<u64> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => {
                parse_u64(&v).ok_or_else(|| Error::Config(format!("bad seed {v:?} for {key}")))
            }
        }
    }

    pub fn bool_or(&mut self, key: &str, default: bool) -> Result<bool> {
        match self
            .raw(key)
            .as_deref()
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            None => Ok(default),
            Some("true" | "yes" | "1" | "on") => Ok(true),
            Some("false" | "no" | "0" | "off") => Ok(false),
            Some(other) => Err(Error::Config(format!("bad boolean {other:?} for {key}"))),
        }
    }

    /// Fails if any key was never read.
    pub fn finish(self) -> Result<()> {
        let unknown: Vec<_> = self
            .entries
            .keys()
            .filter(|k| !self.used.contains(*k))
            .cloned()
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "unknown keys: {}",
                unknown.join(", ")
            )))
        }
    }
}

/// Decimal or `0x`-prefixed hexadecimal.
pub fn parse_u64(s: &str) -> Option<u64> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None => s.parse().ok(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathMode {
    Sequential,
    Keyed,
}

impl PathMode {
    pub fn name(self) -> &'static str {
        match self {
            PathMode::Sequential => "seq",
            PathMode::Keyed => "keyed",
        }
    }
}

impl FromStr for PathMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "seq" | "sequential" => Ok(PathMode::Sequential),
            "keyed" => Ok(PathMode::Keyed),
            other => Err(Error::Config(format!("unknown path mode {other:?}"))),
        }
    }
}

fn cover_params(kv: &mut KeyValues) -> Result<CoverParams> {
    let d = CoverParams::default();
    Ok(CoverParams {
        blur_passes: kv.get_or("blur_passes", d.blur_passes)?,
        gradient_sigma: kv.get_or("gradient_sigma", d.gradient_sigma)?,
        bimodal_means: (
            kv.get_or("bimodal_mean_low", d.bimodal_means.0)?,
            kv.get_or("bimodal_mean_high", d.bimodal_means.1)?,
        ),
        bimodal_sigma: kv.get_or("bimodal_sigma", d.bimodal_sigma)?,
    })
}

/// LSB shaping campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub models: Vec<CoverModel>,
    pub width: usize,
    pub height: usize,
    pub message_lengths: Vec<usize>,
    pub overheads: Vec<u32>,
    pub repetitions: usize,
    pub master_seed: u64,
    pub path_mode: PathMode,
    pub objective: ObjectiveKind,
    pub cover_params: CoverParams,
    /// When false the `search_ms` column is written as zero, making the
    /// whole CSV reproducible byte for byte.
    pub record_timing: bool,
    pub output: Option<PathBuf>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            models: CoverModel::ALL.to_vec(),
            width: 100,
            height: 100,
            message_lengths: vec![1000, 2500, 4000],
            overheads: vec![0, 2, 4, 6, 8],
            repetitions: 30,
            master_seed: 2024,
            path_mode: PathMode::Sequential,
            objective: ObjectiveKind::KlHistogram,
            cover_params: CoverParams::default(),
            record_timing: true,
            output: None,
        }
    }
}

impl CampaignConfig {
    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut kv = KeyValues::parse(text)?;
        let d = Self::default();
        let objective = match kv.raw("objective").as_deref().map(str::trim) {
            None | Some("kl") => ObjectiveKind::KlHistogram,
            Some("stc") | Some("syndrome") => ObjectiveKind::SyndromeCost,
            Some(other) => return Err(Error::Config(format!("unknown objective {other:?}"))),
        };
        let cfg = Self {
            models: kv.list("models")?.unwrap_or(d.models),
            width: kv.get_or("width", d.width)?,
            height: kv.get_or("height", d.height)?,
            message_lengths: kv.list("n")?.unwrap_or(d.message_lengths),
            overheads: kv.list("k")?.unwrap_or(d.overheads),
            repetitions: kv.get_or("reps", d.repetitions)?,
            master_seed: kv.seed("seed", d.master_seed)?,
            path_mode: kv.get_or("path", d.path_mode)?,
            objective,
            cover_params: cover_params(&mut kv)?,
            record_timing: kv.bool_or("record_timing", d.record_timing)?,
            output: kv.get::<String>("out")?.map(PathBuf::from),
        };
        kv.finish()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        if self.models.is_empty() || self.message_lengths.is_empty() || self.overheads.is_empty() {
            return Err(Error::Config("models, n and k must be non-empty".into()));
        }
        if let Some(&k) = self.overheads.iter().find(|&&k| k > MAX_OVERHEAD) {
            return Err(Error::OverheadTooLarge(k));
        }
        if self.objective != ObjectiveKind::KlHistogram {
            return Err(Error::Config(
                "the LSB campaign selects by histogram KL; use stc-sim for syndrome cost".into(),
            ));
        }
        let pixels = self.width * self.height;
        let longest = self.message_lengths.iter().max().unwrap()
            + *self.overheads.iter().max().unwrap() as usize;
        if self.width < 2 || self.height < 2 {
            return Err(Error::Config("covers must be at least 2x2".into()));
        }
        if longest > pixels {
            return Err(Error::Config(format!(
                "payload of {longest} bits does not fit {pixels} pixels"
            )));
        }
        Ok(())
    }

    pub fn run_count(&self) -> usize {
        self.models.len() * self.message_lengths.len() * self.overheads.len() * self.repetitions
    }
}

/// Syndrome-cost shaping campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct StcCampaignConfig {
    pub models: Vec<CoverModel>,
    pub width: usize,
    pub height: usize,
    pub message_lengths: Vec<usize>,
    pub overheads: Vec<u32>,
    pub repetitions: usize,
    pub master_seed: u64,
    pub cover_params: CoverParams,
    pub output: Option<PathBuf>,
}

impl Default for StcCampaignConfig {
    fn default() -> Self {
        Self {
            models: CoverModel::ALL.to_vec(),
            width: 100,
            height: 100,
            message_lengths: vec![1000],
            overheads: vec![0, 2, 4, 6, 8],
            repetitions: 10,
            master_seed: 2024,
            cover_params: CoverParams::default(),
            output: None,
        }
    }
}

impl StcCampaignConfig {
    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut kv = KeyValues::parse(text)?;
        let d = Self::default();
        let cfg = Self {
            models: kv.list("models")?.unwrap_or(d.models),
            width: kv.get_or("width", d.width)?,
            height: kv.get_or("height", d.height)?,
            message_lengths: kv.list("n")?.unwrap_or(d.message_lengths),
            overheads: kv.list("k")?.unwrap_or(d.overheads),
            repetitions: kv.get_or("reps", d.repetitions)?,
            master_seed: kv.seed("seed", d.master_seed)?,
            cover_params: cover_params(&mut kv)?,
            output: kv.get::<String>("out")?.map(PathBuf::from),
        };
        kv.finish()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        if self.models.is_empty() || self.message_lengths.is_empty() || self.overheads.is_empty() {
            return Err(Error::Config("models, n and k must be non-empty".into()));
        }
        if let Some(&k) = self.overheads.iter().find(|&&k| k > MAX_OVERHEAD) {
            return Err(Error::OverheadTooLarge(k));
        }
        if self.width < 2 || self.height < 2 {
            return Err(Error::Config("covers must be at least 2x2".into()));
        }
        Ok(())
    }
}
