use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use sst_stego::harness::{
    aggregate, emit_csv, index_table, kl_table, metric_table, parse_u64, run_campaign,
    run_stc_campaign, stc_summary, timing_study, CampaignConfig, GainMetric, GroupBy,
    StcCampaignConfig, TimingConfig,
};
use sst_stego::imaging::{histogram, read_pgm, write_pgm};
use sst_stego::lsb::{embed_lsb, extract_lsb, PositionList};
use sst_stego::metrics::{kl_div, relative_gain, smooth_normalize};
use sst_stego::rng::keyed_path;
use sst_stego::shaping::{decode_payload, fair_baseline_payload, shape_select_kl, ShapingConfig};
use sst_stego::{BitVec, Error, Image, Result};

#[derive(Parser)]
#[command(
    name = "sst-stego",
    version,
    about = "Reversible payload shaping for LSB and syndrome embedders"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shape a message and embed it into a PGM cover by LSB substitution.
    Embed {
        #[arg(long)]
        cover: PathBuf,
        /// ASCII bit file, one '0'/'1' per bit.
        #[arg(long)]
        message: PathBuf,
        #[arg(long, default_value_t = 8)]
        k: u32,
        /// Session seed for the candidate masks (decimal or 0x-hex).
        #[arg(long, value_parser = seed_arg)]
        seed: u64,
        /// `seq` or `keyed:KEY`.
        #[arg(long, default_value = "seq")]
        path: String,
        #[arg(long)]
        out: PathBuf,
        /// Per-candidate objective values.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Recover a message embedded by `embed`.
    Extract {
        #[arg(long)]
        stego: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        k: u32,
        #[arg(long, value_parser = seed_arg)]
        seed: u64,
        #[arg(long, default_value = "seq")]
        path: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an LSB shaping campaign from a key=value config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for the aggregated tables.
        #[arg(long)]
        summary_dir: Option<PathBuf>,
    },
    /// Run a syndrome-cost shaping campaign.
    StcSim {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-K mean cost and reduction table.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Time exhaustive candidate search for growing K.
    Timing {
        #[arg(long, default_value_t = 12)]
        kmax: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value = "7", value_parser = seed_arg)]
        seed: u64,
    },
}

fn seed_arg(s: &str) -> std::result::Result<u64, String> {
    parse_u64(s).ok_or_else(|| format!("not a 64-bit seed: {s}"))
}

fn parse_path(spec: &str, len: usize, pixels: usize) -> Result<PositionList> {
    match spec.trim() {
        "seq" | "sequential" => PositionList::sequential(len, pixels),
        other => {
            let key = other
                .strip_prefix("keyed:")
                .and_then(parse_u64)
                .ok_or_else(|| {
                    Error::Config(format!("path must be seq or keyed:KEY, got {other:?}"))
                })?;
            keyed_path(key, pixels, len)
        }
    }
}

fn read_image(path: &Path) -> Result<Image> {
    read_pgm(&fs::read(path)?)
}

fn write_csv<T: Serialize + Default>(path: &Path, rows: &[T]) -> Result<()> {
    fs::write(path, emit_csv(rows)?)?;
    Ok(())
}

#[derive(Serialize, Default)]
struct CandidateRow {
    h: u64,
    objective: f64,
    selected: bool,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Embed {
            cover,
            message,
            k,
            seed,
            path,
            out,
            report,
        } => {
            let cover = read_image(&cover)?;
            let message = BitVec::parse_ascii(&fs::read_to_string(&message)?)?;
            let path = parse_path(&path, message.len() + k as usize, cover.len())?;
            let cfg = ShapingConfig::new(k, seed);
            let shaped = shape_select_kl(&cover, &message, &cfg, &path)?;

            let p = smooth_normalize(&histogram(&cover))?;
            let base = embed_lsb(&cover, &fair_baseline_payload(&message, k), &path)?;
            let base_kl = kl_div(&p, &smooth_normalize(&histogram(&base))?);
            fs::write(&out, write_pgm(&shaped.stego))?;
            if let Some(report) = report {
                let rows: Vec<_> = shaped
                    .per_candidate
                    .iter()
                    .map(|&(h, objective)| CandidateRow {
                        h,
                        objective,
                        selected: h == shaped.chosen_h,
                    })
                    .collect();
                write_csv(&report, &rows)?;
            }
            let gain = relative_gain(base_kl, shaped.objective_value)
                .map(|g| format!("{:.2}%", 100.0 * g))
                .unwrap_or_else(|_| "n/a".into());
            println!(
                "h={} kl={:.6e} baseline_kl={:.6e} gain={gain}",
                shaped.chosen_h, shaped.objective_value, base_kl
            );
        }
        Command::Extract {
            stego,
            n,
            k,
            seed,
            path,
            out,
        } => {
            let stego = read_image(&stego)?;
            let len = n + k as usize;
            let path = parse_path(&path, len, stego.len())?;
            let z = extract_lsb(&stego, len, &path)?;
            let (h, message) = decode_payload(&z, k, seed)?;
            fs::write(&out, message.to_ascii())?;
            println!("h={h} bits={}", message.len());
        }
        Command::Simulate {
            config,
            out,
            summary_dir,
        } => {
            let cfg = CampaignConfig::from_kv_text(&fs::read_to_string(&config)?)?;
            let out = out
                .or_else(|| cfg.output.clone())
                .ok_or_else(|| Error::Config("no output path: pass --out or set out=".into()))?;
            let records = run_campaign(&cfg)?;
            write_csv(&out, &records)?;
            if let Some(dir) = summary_dir {
                fs::create_dir_all(&dir)?;
                write_csv(
                    &dir.join("gain_by_k.csv"),
                    &aggregate(&records, GroupBy::K, GainMetric::Kl)?,
                )?;
                write_csv(
                    &dir.join("gain_by_model.csv"),
                    &aggregate(&records, GroupBy::Model, GainMetric::Kl)?,
                )?;
                write_csv(
                    &dir.join("gain_by_n.csv"),
                    &aggregate(&records, GroupBy::N, GainMetric::Kl)?,
                )?;
                write_csv(&dir.join("metrics_by_k.csv"), &metric_table(&records))?;
                write_csv(&dir.join("index_by_k.csv"), &index_table(&records)?)?;
                write_csv(&dir.join("kl_by_k.csv"), &kl_table(&records))?;
            }
            for row in aggregate(&records, GroupBy::K, GainMetric::Kl)? {
                println!(
                    "K={:<3} runs={:<5} gain={:6.2}% ±{:.2}% success={:.2}%",
                    row.group,
                    row.runs,
                    100.0 * row.mean_gain,
                    100.0 * row.ci95,
                    100.0 * row.success_rate
                );
            }
        }
        Command::StcSim {
            config,
            out,
            summary,
        } => {
            let cfg = StcCampaignConfig::from_kv_text(&fs::read_to_string(&config)?)?;
            let out = out
                .or_else(|| cfg.output.clone())
                .ok_or_else(|| Error::Config("no output path: pass --out or set out=".into()))?;
            let records = run_stc_campaign(&cfg)?;
            write_csv(&out, &records)?;
            let rows = stc_summary(&records)?;
            if let Some(summary) = summary {
                write_csv(&summary, &rows)?;
            }
            for row in rows {
                let red = row
                    .reduction_vs_k0
                    .map(|r| format!("{:.2}%", 100.0 * r))
                    .unwrap_or_else(|| "-".into());
                println!(
                    "K={:<3} runs={:<5} cost={:.3} reduction={red}",
                    row.k, row.runs, row.mean_min_cost
                );
            }
        }
        Command::Timing {
            kmax,
            out,
            reps,
            seed,
        } => {
            let cfg = TimingConfig {
                repetitions: reps,
                master_seed: seed,
                ..TimingConfig::up_to(kmax)
            };
            let rows = timing_study(&cfg)?;
            write_csv(&out, &rows)?;
            for row in rows {
                println!(
                    "K={:<3} candidates={:<6} search={:.3} ms per-candidate={:.3} us",
                    row.k, row.configurations, row.mean_search_ms, row.mean_us_per_candidate
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
