//! Feeds a recorded or synthetic link-quality trace through both
//! schedulers and collects their decisions.
//!
//! Trace format, one sample per line, `#` starts a comment:
//!
//! ```text
//! t_s kind value source
//! 0.100 d2d_rssi -71.5 beacon
//! 0.105 cell_rsrp -83.0 reference_signal
//! 0.106 cell_itbs_grant 18 dci
//! ```
//!
//! Timestamps are non-decreasing over the whole file. Replay rules:
//!
//! * A D2D resume check at instant `c` sees every D2D sample with `t <= c`.
//!   Checks due after the last sample are not run.
//! * The cellular scheduler is evaluated right after each cellular sample,
//!   at that sample's time.
//! * Grants that arrive while the cellular link is paused are dropped and
//!   counted, since no DCI exists in that state.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Result, SimError};
use crate::radio::MAX_ITBS;
use crate::sched::{
    CellScheduler, CellSchedulerParams, D2dScheduler, D2dSchedulerParams, DecisionEvent, DecisionLog,
    DecisionRecord, LinkSample, LinkTag, Phase, SampleKind, SampleSource,
};

impl SampleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SampleKind::D2dRssi => "d2d_rssi",
            SampleKind::CellRsrp => "cell_rsrp",
            SampleKind::CellItbsGrant => "cell_itbs_grant",
        }
    }
}

impl FromStr for SampleKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "d2d_rssi" => Ok(SampleKind::D2dRssi),
            "cell_rsrp" => Ok(SampleKind::CellRsrp),
            "cell_itbs_grant" => Ok(SampleKind::CellItbsGrant),
            other => Err(format!("unknown sample kind `{other}`")),
        }
    }
}

impl SampleSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            SampleSource::DataAck => "data_ack",
            SampleSource::Beacon => "beacon",
            SampleSource::Dci => "dci",
            SampleSource::ReferenceSignal => "reference_signal",
        }
    }
}

impl FromStr for SampleSource {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "data_ack" => Ok(SampleSource::DataAck),
            "beacon" => Ok(SampleSource::Beacon),
            "dci" => Ok(SampleSource::Dci),
            "reference_signal" => Ok(SampleSource::ReferenceSignal),
            other => Err(format!("unknown sample source `{other}`")),
        }
    }
}

fn parse_sample(line: &str) -> std::result::Result<LinkSample, String> {
    let f: Vec<&str> = line.split_whitespace().collect();
    if f.len() != 4 {
        return Err(format!("expected 4 fields `t kind value source`, got {}", f.len()));
    }
    let t: f64 = f[0].parse().map_err(|e| format!("bad time `{}`: {e}", f[0]))?;
    if !t.is_finite() || t < 0.0 {
        return Err(format!("time {t} must be finite and non-negative"));
    }
    let kind: SampleKind = f[1].parse()?;
    let value: f64 = f[2].parse().map_err(|e| format!("bad value `{}`: {e}", f[2]))?;
    if !value.is_finite() {
        return Err(format!("value {value} is not finite"));
    }
    let source: SampleSource = f[3].parse()?;
    let ok = match kind {
        SampleKind::D2dRssi => matches!(source, SampleSource::DataAck | SampleSource::Beacon),
        SampleKind::CellRsrp => source == SampleSource::ReferenceSignal,
        SampleKind::CellItbsGrant => source == SampleSource::Dci,
    };
    if !ok {
        return Err(format!("{} samples cannot come from {}", kind.as_str(), source.as_str()));
    }
    if kind == SampleKind::CellItbsGrant
        && (value.fract() != 0.0 || value < 0.0 || value > MAX_ITBS as f64)
    {
        return Err(format!("granted i_tbs must be an integer in 0..={MAX_ITBS}, got {value}"));
    }
    Ok(LinkSample {
        t,
        kind,
        value,
        source,
    })
}

/// Parses a trace. Errors carry the 1-based line number.
pub fn parse_trace(text: &str) -> Result<Vec<LinkSample>> {
    let mut out: Vec<LinkSample> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let s = parse_sample(line).map_err(|msg| SimError::Parse { line: i + 1, msg })?;
        if let Some(prev) = out.last() {
            if s.t < prev.t {
                return Err(SimError::Parse {
                    line: i + 1,
                    msg: format!("time {} precedes previous sample at {}", s.t, prev.t),
                });
            }
        }
        out.push(s);
    }
    Ok(out)
}

pub fn format_trace(samples: &[LinkSample]) -> String {
    let mut out = String::new();
    for s in samples {
        let _ = writeln!(out, "{} {} {} {}", s.t, s.kind.as_str(), s.value, s.source.as_str());
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReplayConfig {
    pub d2d: D2dSchedulerParams,
    pub cell: CellSchedulerParams,
    /// Initial phases. Paused is what the opportunistic modes start in;
    /// a paused D2D link has its first resume check at t = 0.
    pub d2d_initial: Phase,
    pub cell_initial: Phase,
    /// Also emit an `observe` record after every sample.
    pub observe_records: bool,
}

impl Default for ReplayConfig {
    fn default() -> Self {
        Self {
            d2d: D2dSchedulerParams::default(),
            cell: CellSchedulerParams::default(),
            d2d_initial: Phase::Paused,
            cell_initial: Phase::Paused,
            observe_records: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReplayOutput {
    /// Both links' records in emission order.
    pub records: Vec<DecisionRecord>,
    pub dropped_grants: usize,
}

impl ReplayOutput {
    pub fn link(&self, link: LinkTag) -> DecisionLog {
        DecisionLog {
            records: self.records.iter().filter(|r| r.link == link).copied().collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = writeln!(out, "{r}");
        }
        out
    }
}

pub fn replay(samples: &[LinkSample], cfg: &ReplayConfig) -> Result<ReplayOutput> {
    let errs: Vec<String> = cfg.d2d.validate().into_iter().chain(cfg.cell.validate()).collect();
    if !errs.is_empty() {
        return Err(SimError::Validation(errs));
    }
    let mut d2d = match cfg.d2d_initial {
        Phase::Active => D2dScheduler::new_active(cfg.d2d.clone()),
        Phase::Paused => D2dScheduler::new_paused(cfg.d2d.clone(), 0.0),
    };
    let mut cell = CellScheduler::new(cfg.cell.clone(), cfg.cell_initial);
    let mut out = ReplayOutput::default();
    let mut last_d2d_t = None;

    for s in samples {
        match s.kind {
            SampleKind::D2dRssi => {
                out.records.extend(d2d.tick_before(s.t));
                out.records.extend(d2d.observe(s.t, s.value, s.source)?);
                if cfg.observe_records {
                    out.records.push(d2d.record(s.t, DecisionEvent::Observe));
                }
                last_d2d_t = Some(s.t);
            }
            SampleKind::CellRsrp | SampleKind::CellItbsGrant => {
                if s.kind == SampleKind::CellRsrp {
                    cell.observe_rsrp(s.value, s.t)?;
                } else if cell.is_transmitting() {
                    cell.observe_grant(s.value as u8, s.t)?;
                } else {
                    out.dropped_grants += 1;
                }
                out.records.extend(cell.evaluate(s.t));
                if cfg.observe_records {
                    out.records.push(cell.record(s.t, DecisionEvent::Observe));
                }
            }
        }
    }
    if let Some(t) = last_d2d_t {
        out.records.extend(d2d.tick(t));
    }
    Ok(out)
}
