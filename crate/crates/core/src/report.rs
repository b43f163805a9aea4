//! Per-run CSV rows, per-group summary CSV and the plain-text table.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::engine::{Mode, RunResult};
use crate::error::{Result, SimError};
use crate::metrics::{AggregateResult, Summary};

pub const RUNS_HEADER: &str =
    "scenario,mode,seed,total_s,cellular_s,d2d_s,bits_to_bs,mean_itbs,spectral_eff_bps_hz,completed";

/// One line of the per-run CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub scenario: String,
    pub mode: Mode,
    pub seed: u64,
    pub total_s: f64,
    pub cellular_s: f64,
    pub d2d_s: f64,
    pub bits_to_bs: u64,
    pub mean_itbs: f64,
    pub spectral_eff_bps_hz: f64,
    pub completed: bool,
}

impl From<&RunResult> for RunRow {
    fn from(r: &RunResult) -> Self {
        Self {
            scenario: r.scenario.clone(),
            mode: r.mode,
            seed: r.seed,
            total_s: r.total_time,
            cellular_s: r.cellular_time,
            d2d_s: r.d2d_time,
            bits_to_bs: r.bits_to_bs,
            mean_itbs: r.mean_itbs,
            spectral_eff_bps_hz: r.spectral_efficiency,
            completed: r.completed,
        }
    }
}

fn csv_err(e: csv::Error) -> SimError {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => SimError::Io(io),
        other => SimError::Parse {
            line,
            msg: format!("{other:?}"),
        },
    }
}

/// Writes the header and one row per run. The header is written even when
/// there are no runs.
pub fn write_runs_csv<W: Write>(w: W, rows: &[RunRow]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(RUNS_HEADER.split(',')).map_err(csv_err)?;
    for r in rows {
        wtr.serialize(r).map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_runs_csv<R: Read>(r: R) -> Result<Vec<RunRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    if header.join(",") != RUNS_HEADER {
        return Err(SimError::Parse {
            line: 1,
            msg: format!("unexpected header `{}`", header.join(",")),
        });
    }
    rdr.deserialize().map(|row| row.map_err(csv_err)).collect()
}

/// One line of the per-group summary CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scenario: String,
    pub mode: Mode,
    pub n_seeds: usize,
    pub completed: usize,
    pub total_s_mean: f64,
    pub total_s_median: f64,
    pub total_s_ci95: f64,
    pub cellular_s_mean: f64,
    pub cellular_s_median: f64,
    pub cellular_s_ci95: f64,
    pub mean_itbs_mean: f64,
    pub spectral_eff_mean: f64,
    pub spectral_eff_median: f64,
    pub spectral_eff_ci95: f64,
    pub efficiency_factor: Option<f64>,
    pub cellular_time_reduction: Option<f64>,
}

impl From<&AggregateResult> for SummaryRow {
    fn from(a: &AggregateResult) -> Self {
        Self {
            scenario: a.scenario.clone(),
            mode: a.mode,
            n_seeds: a.n_seeds,
            completed: a.completed,
            total_s_mean: a.total_time.mean,
            total_s_median: a.total_time.median,
            total_s_ci95: a.total_time.ci95,
            cellular_s_mean: a.cellular_time.mean,
            cellular_s_median: a.cellular_time.median,
            cellular_s_ci95: a.cellular_time.ci95,
            mean_itbs_mean: a.mean_itbs.mean,
            spectral_eff_mean: a.spectral_efficiency.mean,
            spectral_eff_median: a.spectral_efficiency.median,
            spectral_eff_ci95: a.spectral_efficiency.ci95,
            efficiency_factor: a.efficiency_factor,
            cellular_time_reduction: a.cellular_time_reduction,
        }
    }
}

pub fn write_summary_csv<W: Write>(w: W, aggs: &[AggregateResult]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    if aggs.is_empty() {
        // serde only emits the header with the first record
        let names = [
            "scenario", "mode", "n_seeds", "completed", "total_s_mean", "total_s_median", "total_s_ci95",
            "cellular_s_mean", "cellular_s_median", "cellular_s_ci95", "mean_itbs_mean",
            "spectral_eff_mean", "spectral_eff_median", "spectral_eff_ci95", "efficiency_factor",
            "cellular_time_reduction",
        ];
        wtr.write_record(names).map_err(csv_err)?;
    }
    for a in aggs {
        wtr.serialize(SummaryRow::from(a)).map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_summary_csv<R: Read>(r: R) -> Result<Vec<SummaryRow>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| row.map_err(csv_err))
        .collect()
}

/// Largest CI half-width, in percent of the mean, over the metrics the
/// table reports (total time, cellular time, spectral efficiency).
pub fn worst_margin_pct(aggs: &[AggregateResult]) -> Option<f64> {
    let pct = |s: &Summary| s.ci95_pct();
    aggs.iter()
        .flat_map(|a| [pct(&a.total_time), pct(&a.cellular_time), pct(&a.spectral_efficiency)])
        .max_by(f64::total_cmp)
}

/// The footnote printed under the table.
pub fn margin_footnote(aggs: &[AggregateResult]) -> String {
    let Some(worst) = worst_margin_pct(aggs) else {
        return "No groups to report.".into();
    };
    let min_n = aggs.iter().map(|a| a.n_seeds).min().unwrap_or(0);
    // round up to the next tenth so the bound is never understated
    let bound = (worst * 10.0).ceil() / 10.0;
    format!(
        "The margin of error for the reported average values is below {bound:.1}% with 95% confidence intervals ({min_n}+ seeds per group)."
    )
}

fn opt(v: Option<f64>, scale: f64, suffix: &str) -> String {
    v.map_or("-".into(), |x| format!("{:.2}{suffix}", x * scale))
}

/// Plain-text table with the columns of the paper's summary table, grouped
/// by scenario. Times and efficiency are means over seeds; the gain
/// columns are ratios of medians against CC.
pub fn format_table(aggs: &[AggregateResult]) -> String {
    let mut out = String::new();
    let mut scenarios: Vec<&str> = Vec::new();
    for a in aggs {
        if !scenarios.contains(&a.scenario.as_str()) {
            scenarios.push(&a.scenario);
        }
    }
    for sc in scenarios {
        let _ = writeln!(out, "{sc}");
        let _ = writeln!(
            out,
            "  {:<7} {:>6} {:>16} {:>16} {:>14} {:>7} {:>9} {:>10}",
            "mode", "done", "total tx time s", "cellular time s", "eff bits/s/Hz", "I_TBS", "eff gain", "cell red"
        );
        for a in aggs.iter().filter(|a| a.scenario == sc) {
            let _ = writeln!(
                out,
                "  {:<7} {:>6} {:>16.1} {:>16.1} {:>14.3} {:>7.1} {:>9} {:>10}",
                a.mode.as_str(),
                format!("{}/{}", a.completed, a.n_seeds),
                a.total_time.mean,
                a.cellular_time.mean,
                a.spectral_efficiency.mean,
                a.mean_itbs.mean,
                opt(a.efficiency_factor, 1.0, "x"),
                opt(a.cellular_time_reduction, 100.0, "%"),
            );
        }
    }
    let _ = writeln!(out, "{}", margin_footnote(aggs));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::aggregate;

    fn result(mode: Mode, seed: u64, eff: f64, cell: f64) -> RunResult {
        RunResult {
            scenario: "s".into(),
            mode,
            seed,
            completed: true,
            total_time: cell + 1.0 / 3.0,
            cellular_time: cell,
            d2d_time: 0.0,
            bits_to_bs: 400_000_000,
            file_bits: 400_000_000,
            mean_itbs: 18.25,
            spectral_efficiency: eff,
            n_prb: 25,
            d2d_window: None,
            cellular_window: None,
            cell_blocks: 0,
            cell_block_errors: 0,
            d2d_packets: 0,
            d2d_packet_errors: 0,
            distinct_bytes_at_server: 50_000_000,
            conservation_violations: 0,
        }
    }

    #[test]
    fn empty_run_csv_is_header_only() {
        let mut buf = Vec::new();
        write_runs_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{RUNS_HEADER}\n"));
        let mut buf = Vec::new();
        write_summary_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
    }

    #[test]
    fn run_csv_round_trips_exactly() {
        let rows: Vec<RunRow> = (0..5)
            .map(|i| RunRow::from(&result(Mode::ALL[i % 4], i as u64, 0.1 + 1.0 / (i as f64 + 3.0), 7.0 / 3.0)))
            .collect();
        let mut buf = Vec::new();
        write_runs_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(RUNS_HEADER));
        assert_eq!(read_runs_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn bad_header_is_rejected() {
        let err = read_runs_csv("a,b\n1,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, SimError::Parse { line: 1, .. }));
    }

    #[test]
    fn four_modes_give_four_rows() {
        let runs: Vec<RunResult> = Mode::ALL
            .iter()
            .flat_map(|&m| (0..3).map(move |s| result(m, s, 1.0 + s as f64, 10.0 + s as f64)))
            .collect();
        let aggs = aggregate(&runs).unwrap();
        let mut buf = Vec::new();
        write_summary_csv(&mut buf, &aggs).unwrap();
        let back = read_summary_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 4);
        assert_eq!(back[0], SummaryRow::from(&aggs[0]));
        let table = format_table(&aggs);
        assert!(table.contains("with 95% confidence intervals"));
        assert_eq!(table.lines().filter(|l| l.trim_start().starts_with("Opp")).count(), 2);
    }
}
