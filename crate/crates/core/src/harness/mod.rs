//! Simulation campaigns, summary statistics, timing and CSV output.

mod campaign;
mod config;
mod stats;
mod timing;

pub use campaign::{
    derive_run_seed, run_campaign, run_stc_campaign, RunRecord, RunSeeds, StcRecord,
};
pub use config::{parse_u64, CampaignConfig, KeyValues, PathMode, StcCampaignConfig};
pub use stats::{
    aggregate, index_table, kl_table, metric_table, stc_summary, GainMetric, GroupBy, IndexRow,
    KlRow, MetricRow, StcSummaryRow, SummaryRow,
};
pub use timing::{timing_study, TimingConfig, TimingRow};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::Result;

/// Serialises rows as CSV with a header line, in slice order. An empty slice
/// yields the header alone.
pub fn emit_csv<T: Serialize + Default>(rows: &[T]) -> Result<Vec<u8>> {
    if rows.is_empty() {
        // Serialise a default row to learn the header, then keep only that line.
        let probe = emit_rows(std::slice::from_ref(&T::default()))?;
        let end = probe
            .iter()
            .position(|&b| b == b'\n')
            .map_or(probe.len(), |i| i + 1);
        return Ok(probe[..end].to_vec());
    }
    emit_rows(rows)
}

fn emit_rows<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(true)
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    w.into_inner().map_err(|e| e.into_error().into())
}

pub fn parse_csv<T: DeserializeOwned>(bytes: &[u8]) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(bytes);
    Ok(r.deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()?)
}
