//! One test per acceptance criterion. Each prints `PASS` or `FAIL` lines
//! straight to stdout so they show up even when output is captured.

mod common;

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use oppmcn::audit::{audit, AuditReport};
use oppmcn::cli::{execute, write_outputs};
use oppmcn::engine::{run, Mode, RunResult};
use oppmcn::metrics::{aggregate, median, AggregateResult};
use oppmcn::replay::replay;
use oppmcn::report::{margin_footnote, worst_margin_pct};
use oppmcn::scenarios::{build, SCENARIO_IDS, TRIAL_SCENARIOS};
use oppmcn::sched::{DecisionEvent, LinkTag};
use rayon::prelude::*;

use common::{d2d_samples, random_case, reference_cell, reference_d2d, t_quantile_oracle};

const SEEDS: u64 = 20;
const FILE_BYTES: u64 = 50_000_000;

fn line(ok: bool, what: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{tag} {what}");
    let _ = out.flush();
}

struct Cell {
    result: RunResult,
    audit: AuditReport,
    d2d_pauses: usize,
    cell_pauses: usize,
}

struct Matrix {
    cells: Vec<Cell>,
    elapsed: Duration,
}

/// Every scenario x mode x 20 seeds, audited as it runs. Logs are
/// dropped after the audit to keep memory flat.
fn matrix() -> &'static Matrix {
    static M: OnceLock<Matrix> = OnceLock::new();
    M.get_or_init(|| {
        let start = Instant::now();
        let scenarios: Vec<_> = SCENARIO_IDS.iter().map(|id| build(id, &[]).unwrap()).collect();
        let jobs: Vec<(usize, Mode, u64)> = (0..scenarios.len())
            .flat_map(|i| Mode::ALL.iter().flat_map(move |&m| (0..SEEDS).map(move |s| (i, m, s))))
            .collect();
        let cells = jobs
            .par_iter()
            .map(|&(i, mode, seed)| {
                let sc = &scenarios[i];
                let out = run(sc, mode, seed).unwrap();
                let pauses = |l: LinkTag| {
                    let log = if l == LinkTag::D2d { &out.logs.d2d } else { &out.logs.cell };
                    log.transitions().filter(|r| r.event == DecisionEvent::Pause).count()
                };
                Cell {
                    audit: audit(&out, &sc.d2d_scheduler, &sc.cell_scheduler),
                    d2d_pauses: pauses(LinkTag::D2d),
                    cell_pauses: pauses(LinkTag::Cell),
                    result: out.result,
                }
            })
            .collect();
        Matrix {
            cells,
            elapsed: start.elapsed(),
        }
    })
}

fn aggregates() -> &'static Vec<AggregateResult> {
    static A: OnceLock<Vec<AggregateResult>> = OnceLock::new();
    A.get_or_init(|| {
        let results: Vec<RunResult> = matrix().cells.iter().map(|c| c.result.clone()).collect();
        aggregate(&results).unwrap()
    })
}

fn group<'a>(scenario: &str, mode: Mode) -> Vec<&'a RunResult> {
    matrix()
        .cells
        .iter()
        .map(|c| &c.result)
        .filter(|r| r.scenario == scenario && r.mode == mode)
        .collect()
}

fn med(scenario: &str, mode: Mode, f: fn(&RunResult) -> f64) -> f64 {
    median(&group(scenario, mode).iter().map(|r| f(r)).collect::<Vec<_>>())
}

fn agg(scenario: &str, mode: Mode) -> &'static AggregateResult {
    aggregates()
        .iter()
        .find(|a| a.scenario == scenario && a.mode == mode)
        .unwrap()
}

#[test]
fn criterion_1_scheduler_oracle_equivalence() {
    let start = Instant::now();
    let mismatches: Vec<u64> = (0..1000u64)
        .into_par_iter()
        .filter(|&seed| {
            let (samples, cfg) = random_case(1_000_000 + seed, 10_000);
            let out = replay(&samples, &cfg).unwrap();
            let d2d = reference_d2d(&d2d_samples(&samples), &cfg.d2d, cfg.d2d_initial);
            let (cell, dropped) = reference_cell(&samples, &cfg.cell, cfg.cell_initial);
            out.link(LinkTag::D2d).records != d2d
                || out.link(LinkTag::Cell).records != cell
                || out.dropped_grants != dropped
        })
        .collect();
    let elapsed = start.elapsed();
    let ok = mismatches.is_empty() && elapsed < Duration::from_secs(30);
    line(
        ok,
        &format!(
            "criterion 1: scheduler oracle equivalence, 1000 traces x 10^4 samples, {} mismatches, {:.1} s (budget 30 s)",
            mismatches.len(),
            elapsed.as_secs_f64()
        ),
    );
    assert!(mismatches.is_empty(), "mismatching trace seeds: {mismatches:?}");
    assert!(elapsed < Duration::from_secs(30), "{elapsed:?}");
}

#[test]
fn criterion_2_relay_conservation_and_completion() {
    let mut bad = Vec::new();
    for c in &matrix().cells {
        let r = &c.result;
        let id = format!("{} {} seed {}", r.scenario, r.mode, r.seed);
        if r.conservation_violations != 0 {
            bad.push(format!("{id}: {} conservation violations", r.conservation_violations));
        }
        // the opportunistic modes never start there, by construction
        let never_starts = r.scenario == "always_nlos" && r.mode.is_opportunistic();
        if never_starts {
            if r.cellular_time != 0.0 || r.completed {
                bad.push(format!("{id}: transmitted although the link never qualifies"));
            }
            continue;
        }
        if !r.completed {
            bad.push(format!("{id}: did not complete"));
        }
        if r.distinct_bytes_at_server != FILE_BYTES {
            bad.push(format!("{id}: {} distinct bytes at the server", r.distinct_bytes_at_server));
        }
        if r.bits_to_bs < r.file_bits || r.file_bits != FILE_BYTES * 8 {
            bad.push(format!("{id}: bits_to_bs {} < file bits {}", r.bits_to_bs, r.file_bits));
        }
    }
    line(
        bad.is_empty(),
        &format!(
            "criterion 2: relay conservation and completion over {} runs, {} violations",
            matrix().cells.len(),
            bad.len()
        ),
    );
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn criterion_3_pause_correctness_audit() {
    let mut bad = Vec::new();
    let mut transitions = 0;
    for c in &matrix().cells {
        transitions += c.audit.d2d_transitions + c.audit.cell_transitions;
        for v in &c.audit.violations {
            bad.push(format!("{} {} seed {}: {v}", c.result.scenario, c.result.mode, c.result.seed));
        }
    }
    line(
        bad.is_empty(),
        &format!(
            "criterion 3: pause-correctness audit, {} runs, {transitions} transitions, {} violations",
            matrix().cells.len(),
            bad.len()
        ),
    );
    assert!(transitions > 0);
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn criterion_4_mode_ordering() {
    let eff = |r: &RunResult| r.spectral_efficiency;
    let cell = |r: &RunResult| r.cellular_time;
    let mut bad = Vec::new();
    for sc in TRIAL_SCENARIOS {
        let checks = [
            ("eff OppMCN >= MCN", med(sc, Mode::OppMcn, eff) >= med(sc, Mode::Mcn, eff)),
            ("eff OppCC >= CC", med(sc, Mode::OppCc, eff) >= med(sc, Mode::Cc, eff)),
            ("cell OppCC <= CC", med(sc, Mode::OppCc, cell) <= med(sc, Mode::Cc, cell)),
            ("cell OppMCN <= MCN", med(sc, Mode::OppMcn, cell) <= med(sc, Mode::Mcn, cell)),
        ];
        for (what, ok) in checks {
            if !ok {
                bad.push(format!("{sc}: {what}"));
            }
        }
    }
    line(
        bad.is_empty(),
        &format!("criterion 4: mode ordering on {} trial scenarios, {} violations", TRIAL_SCENARIOS.len(), bad.len()),
    );
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn criterion_5_banded_gain_reproduction() {
    let factor = |sc: &str, m: Mode| agg(sc, m).efficiency_factor.unwrap();
    let reduction = |sc: &str, m: Mode| agg(sc, m).cellular_time_reduction.unwrap();
    let within = |x: f64, lo: f64, hi: f64| (lo..=hi).contains(&x);
    let opp = Mode::OppMcn;
    let bands: Vec<(String, bool)> = vec![
        (
            format!("outdoor_640 OppMCN factor {:.2} in [3.5, 6.0]", factor("outdoor_640", opp)),
            within(factor("outdoor_640", opp), 3.5, 6.0),
        ),
        (
            format!("outdoor_640 OppMCN cellular-time reduction {:.1}% >= 45%", 100.0 * reduction("outdoor_640", opp)),
            reduction("outdoor_640", opp) >= 0.45,
        ),
        (
            format!("outdoor_280 OppMCN factor {:.2} in [2.0, 3.6]", factor("outdoor_280", opp)),
            within(factor("outdoor_280", opp), 2.0, 3.6),
        ),
        (format!("sc OppMCN factor {:.2} in [3.0, 5.6]", factor("sc", opp)), within(factor("sc", opp), 3.0, 5.6)),
        (
            format!("sc OppMCN mean I_TBS {:.1} >= 20", agg("sc", opp).mean_itbs.mean),
            agg("sc", opp).mean_itbs.mean >= 20.0,
        ),
        (
            format!("veh_nlos OppMCN factor {:.2} in [8, 16]", factor("veh_nlos", opp)),
            within(factor("veh_nlos", opp), 8.0, 16.0),
        ),
        (
            format!("veh_nlos OppMCN cellular-time reduction {:.1}% >= 65%", 100.0 * reduction("veh_nlos", opp)),
            reduction("veh_nlos", opp) >= 0.65,
        ),
        (
            format!("veh_los OppCC factor {:.2} in [3.2, 5.4]", factor("veh_los", Mode::OppCc)),
            within(factor("veh_los", Mode::OppCc), 3.2, 5.4),
        ),
        (
            format!("veh_los OppMCN factor {:.2} in [2.6, 4.4]", factor("veh_los", opp)),
            within(factor("veh_los", opp), 2.6, 4.4),
        ),
        (
            format!(
                "veh_los OppCC factor {:.2} > OppMCN factor {:.2}",
                factor("veh_los", Mode::OppCc),
                factor("veh_los", opp)
            ),
            factor("veh_los", Mode::OppCc) > factor("veh_los", opp),
        ),
        (
            format!("full matrix runtime {:.1} s < 600 s", matrix().elapsed.as_secs_f64()),
            matrix().elapsed < Duration::from_secs(600),
        ),
    ];
    for (what, ok) in &bands {
        line(*ok, &format!("criterion 5: {what}"));
    }
    let failed: Vec<&String> = bands.iter().filter(|b| !b.1).map(|b| &b.0).collect();
    line(failed.is_empty(), &format!("criterion 5: banded gain reproduction, {} of {} bands outside", failed.len(), bands.len()));
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn criterion_6_perfect_link_collapse() {
    let cells: Vec<&Cell> = matrix().cells.iter().filter(|c| c.result.scenario == "perfect_link").collect();
    let pauses: usize = cells.iter().map(|c| c.d2d_pauses + c.cell_pauses).sum();
    let mut mismatched = Vec::new();
    for seed in 0..SEEDS {
        let t = |m: Mode| {
            cells
                .iter()
                .find(|c| c.result.mode == m && c.result.seed == seed)
                .unwrap()
                .result
                .cellular_time
        };
        if t(Mode::Cc) != t(Mode::OppCc) || t(Mode::Mcn) != t(Mode::OppMcn) {
            mismatched.push(seed);
        }
    }
    let ok = pauses == 0 && mismatched.is_empty() && cells.iter().all(|c| c.result.completed);
    line(
        ok,
        &format!(
            "criterion 6: perfect link, {pauses} pauses, {} seeds with CC/OppCC or MCN/OppMCN cellular time mismatch",
            mismatched.len()
        ),
    );
    assert!(ok, "pauses {pauses}, mismatched seeds {mismatched:?}");
}

fn snapshot(dir: &std::path::Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                files.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    files
}

#[test]
fn criterion_7_determinism() {
    let ids = vec!["outdoor_640".to_string(), "veh_nlos".to_string()];
    let seeds = [3, 4];
    let mut snaps = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let outs = execute(&ids, &Mode::ALL, &seeds, &[]).unwrap();
        write_outputs(&outs, Some(dir.path()), true).unwrap();
        snaps.push(snapshot(dir.path()));
    }
    let n_files = snaps[0].len();
    let ok = snaps[0] == snaps[1] && n_files == 3 + 2 * 2 * 4 * 2;
    line(ok, &format!("criterion 7: determinism, {n_files} output files byte-identical across two invocations"));
    assert_eq!(n_files, 3 + 2 * 2 * 4 * 2);
    assert!(snaps[0] == snaps[1]);
}

#[test]
fn criterion_8_statistical_reporting() {
    let q = t_quantile_oracle(SEEDS as u32 - 1);
    let mut worst_err: f64 = 0.0;
    let mut checked = 0;
    for a in aggregates() {
        let rs = group(&a.scenario, a.mode);
        assert_eq!(rs.len(), SEEDS as usize);
        type Column = fn(&RunResult) -> f64;
        let metrics: [(Column, f64); 3] = [
            (|r| r.total_time, a.total_time.ci95),
            (|r| r.cellular_time, a.cellular_time.ci95),
            (|r| r.spectral_efficiency, a.spectral_efficiency.ci95),
        ];
        for (f, reported) in metrics {
            let xs: Vec<f64> = rs.iter().map(|r| f(r)).collect();
            let n = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / n;
            let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            let expected = q * sd / n.sqrt();
            worst_err = worst_err.max((reported - expected).abs() / expected.max(1e-12));
            checked += 1;
        }
    }

    // injected data with a known half-width
    let synthetic: Vec<RunResult> = (0..SEEDS)
        .map(|s| {
            let mut r = matrix().cells[0].result.clone();
            r.seed = s;
            r.total_time = 100.0 + if s % 2 == 0 { 1.0 } else { -1.0 };
            r
        })
        .collect();
    let a = &aggregate(&synthetic).unwrap()[0];
    let sd = (SEEDS as f64 / (SEEDS as f64 - 1.0)).sqrt();
    let injected_ok = (a.total_time.ci95 - q * sd / (SEEDS as f64).sqrt()).abs() < 1e-6;

    let trial: Vec<AggregateResult> =
        aggregates().iter().filter(|a| TRIAL_SCENARIOS.contains(&a.scenario.as_str())).cloned().collect();
    let note = margin_footnote(&trial);
    let worst = worst_margin_pct(&trial).unwrap();
    let bound: f64 = note
        .split("below ")
        .nth(1)
        .and_then(|s| s.split('%').next())
        .and_then(|s| s.parse().ok())
        .unwrap();
    let note_ok = note.contains("with 95% confidence intervals") && bound >= worst && bound - worst <= 0.1 + 1e-9;

    let ok = worst_err < 1e-6 && injected_ok && note_ok;
    line(
        ok,
        &format!("criterion 8: {checked} CI half-widths within {worst_err:.1e} of the Student-t oracle; footnote: {note}"),
    );
    assert!(worst_err < 1e-6, "{worst_err}");
    assert!(injected_ok);
    assert!(note_ok, "{note} vs {worst}");
}
