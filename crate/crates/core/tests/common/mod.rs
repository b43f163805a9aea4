//! Straight-line reference executors for both schedulers and a random
//! trace generator. The references recompute every average from the raw
//! samples instead of keeping running windows.

#![allow(dead_code)]

use oppmcn::replay::ReplayConfig;
use oppmcn::sched::{
    CellSchedulerParams, D2dSchedulerParams, DecisionEvent, DecisionRecord, LinkSample, LinkTag, Phase,
    SampleKind, SampleSource, TIME_EPS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rec(t: f64, event: DecisionEvent, avg: Option<f64>, counter: u32, phase: Phase, link: LinkTag) -> DecisionRecord {
    DecisionRecord {
        t,
        event,
        avg,
        counter,
        phase,
        link,
    }
}

/// D2D decisions for `(t, rssi)` samples, time-ordered.
pub fn reference_d2d(samples: &[(f64, f64)], p: &D2dSchedulerParams, start: Phase) -> Vec<DecisionRecord> {
    let n = p.nb_rx;
    let avg_at = |i: usize| -> Option<f64> {
        if i + 1 < n {
            return None;
        }
        let mut sum = 0.0;
        for s in &samples[i + 1 - n..=i] {
            sum += s.1;
        }
        Some(sum / n as f64)
    };
    // newest full-window average among samples with t <= c
    let avg_until = |c: f64| -> Option<f64> {
        let count = samples.partition_point(|s| s.0 <= c);
        count.checked_sub(1).and_then(avg_at)
    };

    let mut out = Vec::new();
    let mut paused = start == Phase::Paused;
    let mut anchor = 0.0;
    let mut k: u64 = 0;
    // first sample index observed in the current active stretch
    let mut stint = 0usize;

    let run_checks = |limit: f64, inclusive: bool, paused: &mut bool, anchor: f64, k: &mut u64, out: &mut Vec<DecisionRecord>| -> Option<f64> {
        while *paused {
            let c = anchor + *k as f64 * p.t_d2d;
            let due = if inclusive { c <= limit } else { c < limit };
            if !due {
                break;
            }
            let avg = avg_until(c);
            if avg.is_some_and(|a| a >= p.rssi_thr) {
                *paused = false;
                out.push(rec(c, DecisionEvent::Resume, avg, 0, Phase::Active, LinkTag::D2d));
                return Some(c);
            }
            *k += 1;
        }
        None
    };

    for (i, &(t, _)) in samples.iter().enumerate() {
        if run_checks(t, false, &mut paused, anchor, &mut k, &mut out).is_some() {
            stint = i;
        }
        if paused {
            continue;
        }
        let Some(a) = avg_at(i) else {
            continue;
        };
        // trailing run of below-threshold averages inside this stint
        let mut run = 0u32;
        let mut j = i as isize;
        while j >= stint as isize {
            match avg_at(j as usize) {
                Some(x) if x < p.rssi_thr => run += 1,
                _ => break,
            }
            j -= 1;
        }
        let counter = run;
        debug_assert_eq!(run == 0, a >= p.rssi_thr);
        if counter >= p.nb_below_thr {
            paused = true;
            anchor = t;
            k = 1;
            out.push(rec(t, DecisionEvent::Pause, Some(a), counter, Phase::Paused, LinkTag::D2d));
        }
    }
    if let Some(&(last, _)) = samples.last() {
        run_checks(last, true, &mut paused, anchor, &mut k, &mut out);
    }
    out
}

#[derive(Clone, Copy)]
enum CellInput {
    Rsrp(f64),
    Grant(u8),
}

/// Cellular decisions plus the number of grants dropped while paused.
pub fn reference_cell(samples: &[LinkSample], p: &CellSchedulerParams, start: Phase) -> (Vec<DecisionRecord>, usize) {
    let h = p.t_cell_avg;
    let mut out = Vec::new();
    let mut dropped = 0;
    let mut paused = start == Phase::Paused;
    // first accepted sample of each kind since the last transition
    let mut since: [Option<f64>; 2] = [None, None];
    // accepted samples still inside the horizon
    let mut seg: Vec<(f64, CellInput)> = Vec::new();

    for s in samples.iter().filter(|s| s.kind != SampleKind::D2dRssi) {
        let t = s.t;
        match s.kind {
            SampleKind::CellRsrp => {
                since[0].get_or_insert(t);
                seg.push((t, CellInput::Rsrp(s.value)));
            }
            _ if paused => dropped += 1,
            _ => {
                since[1].get_or_insert(t);
                seg.push((t, CellInput::Grant(s.value as u8)));
            }
        }
        seg.retain(|&(ts, _)| ts >= t - h - TIME_EPS);
        let Some(first) = since[if paused { 0 } else { 1 }] else {
            continue;
        };
        if t - first < h - TIME_EPS {
            continue;
        }
        let kept: Vec<f64> = seg
            .iter()
            .filter_map(|&(_, v)| match (v, paused) {
                (CellInput::Rsrp(x), true) => Some(x),
                (CellInput::Grant(g), false) => Some(g as f64),
                _ => None,
            })
            .collect();
        if kept.is_empty() {
            continue;
        }
        let mut sum = 0.0;
        for v in &kept {
            sum += v;
        }
        let avg = sum / kept.len() as f64;
        let fire = if paused { avg > p.rsrp_thr } else { avg < p.itbs_thr as f64 };
        if fire {
            let (event, phase) = if paused {
                (DecisionEvent::Resume, Phase::Active)
            } else {
                (DecisionEvent::Pause, Phase::Paused)
            };
            out.push(rec(t, event, Some(avg), kept.len() as u32, phase, LinkTag::Cell));
            paused = !paused;
            seg.clear();
            since = [None, None];
        }
    }
    (out, dropped)
}

/// Random scheduler parameters and a trace of `n` samples on a 1 ms grid,
/// with values that often land exactly on the thresholds.
pub fn random_case(seed: u64, n: usize) -> (Vec<LinkSample>, ReplayConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d2d = D2dSchedulerParams {
        rssi_thr: rng.random_range(-80..=-60) as f64,
        nb_rx: rng.random_range(1..=9),
        nb_below_thr: rng.random_range(1..=4),
        t_d2d: [0.05, 0.1, 0.25, 0.5, 1.0][rng.random_range(0..5)],
        beacon_interval: 0.1,
    };
    let cell = CellSchedulerParams {
        itbs_thr: rng.random_range(8..=22),
        rsrp_thr: rng.random_range(-90..=-70) as f64,
        t_cell_avg: [0.02, 0.05, 0.1, 0.2][rng.random_range(0..4)],
        rsrp_period: 0.005,
    };
    let phase = |b: bool| if b { Phase::Paused } else { Phase::Active };
    let cfg = ReplayConfig {
        d2d_initial: phase(rng.random_bool(0.7)),
        cell_initial: phase(rng.random_bool(0.7)),
        observe_records: false,
        d2d,
        cell,
    };

    let mut tick: u64 = 0;
    let mut rssi = cfg.d2d.rssi_thr;
    let mut rsrp = cfg.cell.rsrp_thr;
    let mut itbs = cfg.cell.itbs_thr as i32;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        // zero steps give coincident samples
        tick += rng.random_range(0..=4);
        let t = tick as f64 * 1e-3;
        let roll: f64 = rng.random();
        let s = if roll < 0.35 {
            rssi = (rssi + rng.random_range(-4..=4) as f64 * 0.5).clamp(cfg.d2d.rssi_thr - 15.0, cfg.d2d.rssi_thr + 15.0);
            let source = if rng.random_bool(0.5) { SampleSource::DataAck } else { SampleSource::Beacon };
            LinkSample { t, kind: SampleKind::D2dRssi, value: rssi, source }
        } else if roll < 0.65 {
            rsrp = (rsrp + rng.random_range(-4..=4) as f64 * 0.25).clamp(cfg.cell.rsrp_thr - 10.0, cfg.cell.rsrp_thr + 10.0);
            LinkSample { t, kind: SampleKind::CellRsrp, value: rsrp, source: SampleSource::ReferenceSignal }
        } else {
            itbs = (itbs + rng.random_range(-2..=2)).clamp(0, 26);
            LinkSample { t, kind: SampleKind::CellItbsGrant, value: itbs as f64, source: SampleSource::Dci }
        };
        out.push(s);
    }
    (out, cfg)
}

pub fn d2d_samples(samples: &[LinkSample]) -> Vec<(f64, f64)> {
    samples.iter().filter(|s| s.kind == SampleKind::D2dRssi).map(|s| (s.t, s.value)).collect()
}

/// Gamma at a positive multiple of one half.
fn gamma_half(x2: u32) -> f64 {
    // x = x2 / 2
    if x2.is_multiple_of(2) {
        (1..x2 / 2).map(|k| k as f64).product()
    } else {
        let mut g = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while (2.0 * x) as u32 != x2 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

fn t_pdf(x: f64, df: u32) -> f64 {
    let v = df as f64;
    let c = gamma_half(df + 1) / ((v * std::f64::consts::PI).sqrt() * gamma_half(df));
    c * (1.0 + x * x / v).powf(-(v + 1.0) / 2.0)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// 97.5% quantile by bisection on the integrated density.
pub fn t_quantile_oracle(df: u32) -> f64 {
    let (mut lo, mut hi) = (0.0, 50.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if simpson(|x| t_pdf(x, df), 0.0, mid, 20_000) < 0.475 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
