use serde::{Deserialize, Serialize};

use super::campaign::{RunRecord, StcRecord};
use crate::error::{Error, Result};
use crate::metrics::relative_gain;
use crate::shaping::index_stat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    K,
    Model,
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainMetric {
    Kl,
    Js,
    Tv,
    Chi2,
    CoocL1,
}

impl GainMetric {
    pub fn of(self, r: &RunRecord) -> f64 {
        match self {
            GainMetric::Kl => r.gain_kl,
            GainMetric::Js => r.gain_js,
            GainMetric::Tv => r.gain_tv,
            GainMetric::Chi2 => r.gain_chi2,
            GainMetric::CoocL1 => r.gain_cooc_l1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub group: String,
    pub runs: usize,
    pub mean_gain: f64,
    pub ci95: f64,
    pub success_rate: f64,
}

fn key_of(r: &RunRecord, by: GroupBy) -> String {
    match by {
        GroupBy::K => r.k.to_string(),
        GroupBy::Model => r.model.to_string(),
        GroupBy::N => r.n.to_string(),
    }
}

/// Groups in order of first appearance.
fn grouped<T, K: PartialEq>(items: &[T], key: impl Fn(&T) -> K) -> Vec<(K, Vec<&T>)> {
    let mut groups: Vec<(K, Vec<&T>)> = Vec::new();
    for it in items {
        let k = key(it);
        match groups.iter_mut().find(|(g, _)| *g == k) {
            Some((_, v)) => v.push(it),
            None => groups.push((k, vec![it])),
        }
    }
    groups
}

/// Mean and normal-approximation 95% half-width (`1.96 s / sqrt(n)`, sample
/// standard deviation). A single observation reports a zero half-width.
pub(crate) fn mean_ci95(xs: &[f64]) -> Result<(f64, f64)> {
    if xs.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return Ok((mean, 0.0));
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, 1.96 * var.sqrt() / n.sqrt()))
}

pub fn aggregate(
    records: &[RunRecord],
    by: GroupBy,
    metric: GainMetric,
) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(Error::EmptyGroup);
    }
    grouped(records, |r| key_of(r, by))
        .into_iter()
        .map(|(group, rs)| {
            let gains: Vec<f64> = rs.iter().map(|r| metric.of(r)).collect();
            let (mean_gain, ci95) = mean_ci95(&gains)?;
            let wins = gains.iter().filter(|&&g| g > 0.0).count();
            Ok(SummaryRow {
                group,
                runs: gains.len(),
                mean_gain,
                ci95,
                success_rate: wins as f64 / gains.len() as f64,
            })
        })
        .collect()
}

/// Mean gain of every metric per K.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub k: u32,
    pub runs: usize,
    pub kl: f64,
    pub js: f64,
    pub tv: f64,
    pub chi2: f64,
    pub cooc_l1: f64,
}

pub fn metric_table(records: &[RunRecord]) -> Vec<MetricRow> {
    grouped(records, |r| r.k)
        .into_iter()
        .map(|(k, rs)| {
            let n = rs.len() as f64;
            let mean = |m: GainMetric| rs.iter().map(|r| m.of(r)).sum::<f64>() / n;
            MetricRow {
                k,
                runs: rs.len(),
                kl: mean(GainMetric::Kl),
                js: mean(GainMetric::Js),
                tv: mean(GainMetric::Tv),
                chi2: mean(GainMetric::Chi2),
                cooc_l1: mean(GainMetric::CoocL1),
            }
        })
        .collect()
}

/// Dispersion of the selected index per K (K = 0 is skipped).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IndexRow {
    pub k: u32,
    pub runs: usize,
    pub mean_normalized_h: f64,
    pub largest_bucket_share: f64,
}

pub fn index_table(records: &[RunRecord]) -> Result<Vec<IndexRow>> {
    grouped(records, |r| r.k)
        .into_iter()
        .filter(|(k, _)| *k > 0)
        .map(|(k, rs)| {
            let hs: Vec<u64> = rs.iter().map(|r| r.chosen_h).collect();
            let (mean_normalized_h, largest_bucket_share) = index_stat(&hs, k)?;
            Ok(IndexRow {
                k,
                runs: hs.len(),
                mean_normalized_h,
                largest_bucket_share,
            })
        })
        .collect()
}

/// Mean absolute KL of both arms per K.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct KlRow {
    pub k: u32,
    pub mean_base_kl: f64,
    pub mean_sst_kl: f64,
}

pub fn kl_table(records: &[RunRecord]) -> Vec<KlRow> {
    grouped(records, |r| r.k)
        .into_iter()
        .map(|(k, rs)| {
            let n = rs.len() as f64;
            KlRow {
                k,
                mean_base_kl: rs.iter().map(|r| r.base_kl).sum::<f64>() / n,
                mean_sst_kl: rs.iter().map(|r| r.sst_kl).sum::<f64>() / n,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StcSummaryRow {
    pub k: u32,
    pub configurations: u64,
    pub runs: usize,
    pub mean_min_cost: f64,
    /// Relative to the K = 0 row; empty when the campaign has no K = 0.
    pub reduction_vs_k0: Option<f64>,
}

pub fn stc_summary(records: &[StcRecord]) -> Result<Vec<StcSummaryRow>> {
    let groups = grouped(records, |r| r.k);
    let mean_of = |rs: &[&StcRecord]| rs.iter().map(|r| r.min_cost).sum::<f64>() / rs.len() as f64;
    let reference = groups
        .iter()
        .find(|(k, _)| *k == 0)
        .map(|(_, rs)| mean_of(rs));
    groups
        .iter()
        .map(|(k, rs)| {
            let mean = mean_of(rs);
            Ok(StcSummaryRow {
                k: *k,
                configurations: 1u64 << k,
                runs: rs.len(),
                mean_min_cost: mean,
                reduction_vs_k0: reference.map(|r| relative_gain(r, mean)).transpose()?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::CoverModel;

    fn rec(k: u32, gain: f64) -> RunRecord {
        RunRecord {
            k,
            gain_kl: gain,
            ..RunRecord::default()
        }
    }

    #[test]
    fn single_record_has_zero_width() {
        let rows = aggregate(&[rec(2, 0.3)], GroupBy::K, GainMetric::Kl).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(
            (rows[0].mean_gain, rows[0].ci95, rows[0].success_rate),
            (0.3, 0.0, 1.0)
        );
    }

    #[test]
    fn two_point_interval() {
        let rows = aggregate(&[rec(2, 0.0), rec(2, 1.0)], GroupBy::K, GainMetric::Kl).unwrap();
        assert_eq!(rows[0].mean_gain, 0.5);
        assert!((rows[0].ci95 - 0.98).abs() < 1e-12);
        assert_eq!(rows[0].success_rate, 0.5);
    }

    #[test]
    fn groups_keep_first_appearance_order() {
        let mut a = rec(8, 0.1);
        a.model = CoverModel::Bimodal;
        let mut b = rec(2, 0.1);
        b.model = CoverModel::Smooth;
        let rows = aggregate(&[a.clone(), b, a], GroupBy::Model, GainMetric::Kl).unwrap();
        let names: Vec<_> = rows.iter().map(|r| r.group.as_str()).collect();
        assert_eq!(names, ["bimodal", "smooth"]);
        assert!(aggregate(&[], GroupBy::K, GainMetric::Kl).is_err());
    }

    #[test]
    fn stc_reduction_column() {
        let mk = |k, c| StcRecord {
            k,
            min_cost: c,
            ..StcRecord::default()
        };
        let rows = stc_summary(&[mk(0, 100.0), mk(0, 120.0), mk(4, 99.0)]).unwrap();
        assert_eq!(rows[0].reduction_vs_k0, Some(0.0));
        assert!((rows[1].reduction_vs_k0.unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(rows[1].configurations, 16);
        let rows = stc_summary(&[mk(2, 5.0)]).unwrap();
        assert_eq!(rows[0].reduction_vs_k0, None);
    }
}
