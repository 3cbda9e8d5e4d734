//! Acceptance criteria at desk scale: 100x100 covers, N = 1000 and 10
//! repetitions per cell unless a criterion says otherwise. Each test prints a
//! single PASS/FAIL line; run with `--nocapture` to see them.

mod common;

use std::sync::{Mutex, MutexGuard, OnceLock};

use sst_stego::bits::BitVec;
use sst_stego::harness::{
    aggregate, emit_csv, index_table, metric_table, run_campaign, run_stc_campaign, stc_summary,
    timing_study, CampaignConfig, GainMetric, GroupBy, PathMode, RunRecord, StcCampaignConfig,
    SummaryRow, TimingConfig,
};
use sst_stego::imaging::{cooccurrence, generate_cover, histogram, Counts256, CoverModel, Image};
use sst_stego::lsb::{embed_lsb, extract_lsb, PositionList};
use sst_stego::metrics::{chi2_sym, js_div, kl_div, smooth_normalize, tv_dist};
use sst_stego::rng::{keyed_path, RngState};
use sst_stego::shaping::{build_payload, decode_payload, shape_select_kl, ShapingConfig};
use sst_stego::stc::{block_min_cost, CheckMatrix};

const MASTER_SEED: u64 = 2024;

/// Timing and parallel campaigns must not overlap.
fn serial() -> MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!(
        "[{}] {id:>2} {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn pct(x: f64) -> String {
    format!("{:.2}%", 100.0 * x)
}

/// 4 models x N {1000, 2500, 4000} x K {0, 2, 4, 6, 8} x 10 reps, sequential paths.
fn grid() -> &'static [RunRecord] {
    static GRID: OnceLock<Vec<RunRecord>> = OnceLock::new();
    GRID.get_or_init(|| {
        let cfg = CampaignConfig {
            message_lengths: vec![1000, 2500, 4000],
            overheads: vec![0, 2, 4, 6, 8],
            repetitions: 10,
            master_seed: MASTER_SEED,
            path_mode: PathMode::Sequential,
            record_timing: false,
            ..CampaignConfig::default()
        };
        run_campaign(&cfg).unwrap()
    })
}

fn desk() -> Vec<RunRecord> {
    grid().iter().filter(|r| r.n == 1000).cloned().collect()
}

fn row<'a>(rows: &'a [SummaryRow], group: &str) -> &'a SummaryRow {
    rows.iter().find(|r| r.group == group).unwrap()
}

#[test]
fn c01_exact_zero_baseline() {
    let _g = serial();
    let zero: Vec<RunRecord> = grid().iter().filter(|r| r.k == 0).cloned().collect();
    let rows = aggregate(&zero, GroupBy::K, GainMetric::Kl).unwrap();
    let r = row(&rows, "0");
    let all_zero = zero
        .iter()
        .all(|r| r.gain_kl == 0.0 && r.base_kl == r.sst_kl);
    let pass = all_zero && r.mean_gain == 0.0 && r.ci95 == 0.0;
    report(
        1,
        "exact-zero baseline",
        pass,
        format!(
            "K=0 runs={} mean={} ci95={}",
            r.runs,
            pct(r.mean_gain),
            r.ci95
        ),
    );
}

#[test]
fn c02_monotone_k_trend() {
    let _g = serial();
    let rows = aggregate(&desk(), GroupBy::K, GainMetric::Kl).unwrap();
    let gains: Vec<f64> = ["2", "4", "6", "8"]
        .iter()
        .map(|k| row(&rows, k).mean_gain)
        .collect();
    let increasing = gains.windows(2).all(|w| w[1] > w[0]);
    let positive = gains.iter().all(|&g| g > 0.0);
    let k8 = gains[3];
    let pass = increasing && positive && (0.30..=0.55).contains(&k8);
    let shown: Vec<String> = gains.iter().map(|&g| pct(g)).collect();
    report(
        2,
        "monotone K trend",
        pass,
        format!("K=2/4/6/8 gains {} (K=8 in [30%, 55%])", shown.join("/")),
    );
}

#[test]
fn c03_success_rate() {
    let _g = serial();
    let rows = aggregate(&desk(), GroupBy::K, GainMetric::Kl).unwrap();
    let r = row(&rows, "8");
    report(
        3,
        "success rate",
        r.success_rate >= 0.95,
        format!(
            "K=8 success {} over {} runs (>= 95%)",
            pct(r.success_rate),
            r.runs
        ),
    );
}

#[test]
fn c04_n_insensitivity() {
    let _g = serial();
    let rows = aggregate(grid(), GroupBy::N, GainMetric::Kl).unwrap();
    let gains: Vec<f64> = ["1000", "2500", "4000"]
        .iter()
        .map(|n| row(&rows, n).mean_gain)
        .collect();
    let spread = gains.iter().cloned().fold(f64::MIN, f64::max)
        - gains.iter().cloned().fold(f64::MAX, f64::min);
    let shown: Vec<String> = gains.iter().map(|&g| pct(g)).collect();
    report(
        4,
        "N-insensitivity",
        spread < 0.10,
        format!(
            "N=1000/2500/4000 gains {}; max spread {} (< 10 pp)",
            shown.join("/"),
            pct(spread)
        ),
    );
}

#[test]
fn c05_cover_model_ordering() {
    let _g = serial();
    let rows = aggregate(&desk(), GroupBy::Model, GainMetric::Kl).unwrap();
    let g = |m: &str| row(&rows, m).mean_gain;
    let pass = g("smooth") > g("uniform") && g("bimodal") > g("gradient");
    report(
        5,
        "cover-model ordering",
        pass,
        format!(
            "smooth {} > uniform {}; bimodal {} > gradient {}",
            pct(g("smooth")),
            pct(g("uniform")),
            pct(g("bimodal")),
            pct(g("gradient"))
        ),
    );
}

#[test]
fn c06_keyed_path_robustness() {
    let _g = serial();
    let cfg = CampaignConfig {
        message_lengths: vec![1000],
        overheads: vec![8],
        repetitions: 10,
        master_seed: MASTER_SEED,
        path_mode: PathMode::Keyed,
        record_timing: false,
        ..CampaignConfig::default()
    };
    let rows = metric_table(&run_campaign(&cfg).unwrap());
    let m = &rows[0];
    let pass = m.kl >= 0.30 && m.js >= 0.15 && m.chi2 >= 0.15 && m.tv >= 0.05 && m.cooc_l1 >= -0.02;
    report(
        6,
        "keyed-path robustness",
        pass,
        format!(
            "K=8 runs={} KL {} JS {} chi2 {} TV {} cooc {}",
            m.runs,
            pct(m.kl),
            pct(m.js),
            pct(m.chi2),
            pct(m.tv),
            pct(m.cooc_l1)
        ),
    );
}

#[test]
fn c07_index_dispersion() {
    let _g = serial();
    let rows = index_table(grid()).unwrap();
    let r = rows.iter().find(|r| r.k == 8).unwrap();
    let pass = r.runs >= 100
        && r.largest_bucket_share <= 0.10
        && (0.4..=0.6).contains(&r.mean_normalized_h);
    report(
        7,
        "index dispersion",
        pass,
        format!(
            "K=8 runs={} largest bucket {} mean h/(2^K-1) {:.3}",
            r.runs,
            pct(r.largest_bucket_share),
            r.mean_normalized_h
        ),
    );
}

#[test]
fn c08_timing_shape() {
    let _g = serial();
    let cfg = TimingConfig::up_to(12);
    let rows = timing_study(&cfg).unwrap();
    let per: Vec<(u32, f64)> = rows
        .iter()
        .filter(|r| [4, 8, 10, 12].contains(&r.k))
        .map(|r| (r.k, r.mean_us_per_candidate))
        .collect();
    let max = per.iter().map(|p| p.1).fold(f64::MIN, f64::max);
    let min = per.iter().map(|p| p.1).fold(f64::MAX, f64::min);
    let shown: Vec<String> = per
        .iter()
        .map(|(k, us)| format!("K={k}:{us:.2}us"))
        .collect();
    report(
        8,
        "timing shape",
        per.len() == 4 && max / min <= 2.0,
        format!("{} ratio {:.3} (<= 2)", shown.join(" "), max / min),
    );
}

#[test]
fn c09_stc_cost_reduction() {
    let _g = serial();
    let cfg = StcCampaignConfig {
        overheads: vec![0, 2, 4, 6, 8],
        repetitions: 10,
        master_seed: MASTER_SEED,
        ..StcCampaignConfig::default()
    };
    let rows = stc_summary(&run_stc_campaign(&cfg).unwrap()).unwrap();
    let costs: Vec<f64> = rows.iter().map(|r| r.mean_min_cost).collect();
    let non_increasing = costs.windows(2).all(|w| w[1] <= w[0]);
    let k8 = rows
        .iter()
        .find(|r| r.k == 8)
        .and_then(|r| r.reduction_vs_k0)
        .unwrap();
    let pass = rows.len() == 5 && non_increasing && (0.02..=0.15).contains(&k8);
    let shown: Vec<String> = costs.iter().map(|c| format!("{c:.3}")).collect();
    report(
        9,
        "STC cost reduction",
        pass,
        format!(
            "mean costs {} K=8 reduction {} (in [2%, 15%])",
            shown.join(" > "),
            pct(k8)
        ),
    );
}

fn random_bits(st: &mut RngState, n: usize) -> BitVec {
    (0..n).map(|_| st.next_u64() & 1 == 1).collect()
}

fn check_payload_round_trip() -> Result<(), String> {
    let mut st = RngState::new(1);
    let cover = generate_cover(CoverModel::Smooth, 64, 64, &mut st).unwrap();
    for k in 0..=12u32 {
        let s = random_bits(&mut st, 200 + k as usize);
        let session = st.next_u64();
        let cfg = ShapingConfig::new(k, session);
        for h in [0, (1u64 << k) - 1, st.next_u64() % (1 << k)] {
            let z = build_payload(h, &s, &cfg).map_err(|e| e.to_string())?;
            let (hh, ss) = decode_payload(&z, k, session).map_err(|e| e.to_string())?;
            if (hh, &ss) != (h, &s) {
                return Err(format!("decode mismatch at K={k} h={h}"));
            }
        }
        let path = keyed_path(k as u64, cover.len(), s.len() + k as usize).unwrap();
        let shaped = shape_select_kl(&cover, &s, &cfg, &path).map_err(|e| e.to_string())?;
        let z =
            extract_lsb(&shaped.stego, s.len() + k as usize, &path).map_err(|e| e.to_string())?;
        let (h, back) = decode_payload(&z, k, session).map_err(|e| e.to_string())?;
        if h != shaped.chosen_h || back != s {
            return Err(format!("embedded round trip failed at K={k}"));
        }
    }
    Ok(())
}

fn check_lsb_round_trip() -> Result<(), String> {
    let mut st = RngState::new(2);
    for model in CoverModel::ALL {
        let cover = generate_cover(model, 50, 40, &mut st).unwrap();
        let len = 1 + (st.next_u64() % 2000) as usize;
        let payload = random_bits(&mut st, len);
        let path = keyed_path(st.next_u64(), cover.len(), len).unwrap();
        let stego = embed_lsb(&cover, &payload, &path).map_err(|e| e.to_string())?;
        if extract_lsb(&stego, len, &path).map_err(|e| e.to_string())? != payload {
            return Err(format!("{model:?}: extracted bits differ"));
        }
        let on_path: std::collections::HashSet<usize> = path.as_slice().iter().copied().collect();
        for (i, (a, b)) in cover.pixels().iter().zip(stego.pixels()).enumerate() {
            if (a >> 1 != b >> 1) || (!on_path.contains(&i) && a != b) {
                return Err(format!("{model:?}: pixel {i} changed beyond its LSB"));
            }
        }
    }
    Ok(())
}

fn check_dp_brute_force() -> Result<(), String> {
    let h = CheckMatrix::counting(4, 8).unwrap();
    let mut st = RngState::new(3);
    for trial in 0..10_000 {
        let cover: Vec<bool> = (0..8).map(|_| st.next_u64() & 1 == 1).collect();
        let w: Vec<f64> = (0..8).map(|_| 1.0 - st.next_f64()).collect();
        let t = (st.next_u64() % 16) as u16;
        let (cost, _) = block_min_cost(&cover, &w, t, &h);
        let (brute, _) = common::block_brute(&cover, &w, t, h.columns());
        if (cost - brute).abs() > 1e-12 {
            return Err(format!("block {trial}: dp {cost} brute {brute}"));
        }
    }
    Ok(())
}

fn check_shape_select_brute_force() -> Result<(), String> {
    let mut st = RngState::new(4);
    for model in CoverModel::ALL {
        let cover = generate_cover(model, 16, 16, &mut st).unwrap();
        let s = random_bits(&mut st, 32);
        let bits: Vec<bool> = (0..32).map(|i| s.get(i)).collect();
        let session = st.next_u64();
        let path = PositionList::sequential(35, cover.len()).unwrap();
        let got = shape_select_kl(&cover, &s, &ShapingConfig::new(3, session), &path)
            .map_err(|e| e.to_string())?;
        let scores: Vec<f64> = (0..8)
            .map(|h| {
                common::lsb_kl(
                    cover.pixels(),
                    path.as_slice(),
                    &common::candidate(h, 3, &bits, session),
                )
            })
            .collect();
        let best = (0..8).fold(0, |b, h| if scores[h] < scores[b] { h } else { b });
        if got.chosen_h != best as u64 || (got.objective_value - scores[best]).abs() > 1e-12 {
            return Err(format!(
                "{model:?}: chose {} ({}) vs {best} ({})",
                got.chosen_h, got.objective_value, scores[best]
            ));
        }
    }
    Ok(())
}

fn check_metric_axioms() -> Result<(), String> {
    let mut st = RngState::new(5);
    for _ in 0..500 {
        let mut a = Counts256([0; 256]);
        let mut b = Counts256([0; 256]);
        for v in 0..256 {
            a.0[v] = st.next_u64() % 50;
            b.0[v] = st.next_u64() % 50;
        }
        let (p, q) = (smooth_normalize(&a).unwrap(), smooth_normalize(&b).unwrap());
        let (kl, js, tv, chi2) = (
            kl_div(&p, &q),
            js_div(&p, &q),
            tv_dist(&p, &q),
            chi2_sym(&p, &q),
        );
        if [kl, js, tv, chi2].iter().any(|&v| v < 0.0) {
            return Err("negative divergence".into());
        }
        if [
            kl_div(&p, &p),
            js_div(&p, &p),
            tv_dist(&p, &p),
            chi2_sym(&p, &p),
        ]
        .iter()
        .any(|&v| v.abs() > 1e-12)
        {
            return Err("nonzero self-distance".into());
        }
        if (js - js_div(&q, &p)).abs() > 1e-12
            || (tv - tv_dist(&q, &p)).abs() > 1e-12
            || (chi2 - chi2_sym(&q, &p)).abs() > 1e-12
        {
            return Err("asymmetric JS/TV/chi2".into());
        }
        if tv > (kl * std::f64::consts::LN_2 / 2.0).sqrt() + 1e-12 {
            return Err(format!("Pinsker violated: tv {tv} kl {kl}"));
        }
    }
    Ok(())
}

fn check_count_conservation() -> Result<(), String> {
    let mut st = RngState::new(6);
    for (w, h) in [(2usize, 1usize), (100, 100), (37, 53)] {
        let px: Vec<u8> = (0..w * h).map(|_| st.next_u64() as u8).collect();
        let img = Image::new(w, h, px).unwrap();
        let hist = histogram(&img).total();
        let cooc = cooccurrence(&img).unwrap().total();
        if hist != (w * h) as u64 || cooc != (h * (w - 1)) as u64 {
            return Err(format!("{w}x{h}: histogram {hist} co-occurrence {cooc}"));
        }
    }
    Ok(())
}

fn check_csv_reproducible() -> Result<(), String> {
    let cfg = CampaignConfig {
        message_lengths: vec![1000],
        overheads: vec![0, 4],
        repetitions: 2,
        path_mode: PathMode::Keyed,
        record_timing: false,
        ..CampaignConfig::default()
    };
    let a = emit_csv(&run_campaign(&cfg).unwrap()).unwrap();
    let b = emit_csv(&run_campaign(&cfg).unwrap()).unwrap();
    if a != b {
        return Err("campaign CSV differs between runs".into());
    }
    Ok(())
}

type Check = fn() -> Result<(), String>;

#[test]
fn c10_property_suite() {
    let _g = serial();
    let checks: [(&str, Check); 7] = [
        ("payload round trip K<=12", check_payload_round_trip),
        ("LSB round trip", check_lsb_round_trip),
        ("DP = brute force on 10^4 blocks", check_dp_brute_force),
        ("shape_select = brute force", check_shape_select_brute_force),
        ("metric axioms", check_metric_axioms),
        ("count conservation", check_count_conservation),
        ("byte-identical CSV", check_csv_reproducible),
    ];
    let failures: Vec<String> = checks
        .iter()
        .filter_map(|(name, f)| f().err().map(|e| format!("{name}: {e}")))
        .collect();
    let detail = if failures.is_empty() {
        format!("{} checks ok", checks.len())
    } else {
        failures.join("; ")
    };
    report(10, "property suite", failures.is_empty(), detail);
}
