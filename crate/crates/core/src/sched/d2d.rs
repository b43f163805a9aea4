use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::sched::{DecisionEvent, DecisionRecord, LinkTag, Phase, SampleSource};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct D2dSchedulerParams {
    /// RSSI threshold, dBm.
    pub rssi_thr: f64,
    /// Packets averaged into one RSSI average.
    pub nb_rx: usize,
    /// Consecutive below-threshold averages that pause the link.
    pub nb_below_thr: u32,
    /// Seconds between resume checks while paused.
    pub t_d2d: f64,
    /// Beacon period, seconds.
    pub beacon_interval: f64,
}

impl Default for D2dSchedulerParams {
    fn default() -> Self {
        Self {
            rssi_thr: -70.0,
            nb_rx: 7,
            nb_below_thr: 3,
            t_d2d: 1.0,
            beacon_interval: 0.1,
        }
    }
}

impl D2dSchedulerParams {
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if self.nb_rx < 1 {
            errs.push("nb_rx must be >= 1".into());
        }
        if self.nb_below_thr < 1 {
            errs.push("nb_below_thr must be >= 1".into());
        }
        if !(self.t_d2d > 0.0) {
            errs.push("t_d2d must be positive".into());
        }
        if !(self.beacon_interval > 0.0) {
            errs.push("beacon_interval must be positive".into());
        }
        if !self.rssi_thr.is_finite() {
            errs.push("rssi_thr must be finite".into());
        }
        errs
    }
}

/// RSSI-driven pause/resume machine of the source node's D2D link.
///
/// Pausing needs `nb_below_thr` consecutive full-window averages strictly
/// below the threshold; resuming happens only at check instants
/// `anchor + k * t_d2d` and needs an average at or above it.
#[derive(Clone, Debug)]
pub struct D2dScheduler {
    params: D2dSchedulerParams,
    phase: Phase,
    window: VecDeque<f64>,
    below_counter: u32,
    current_avg: Option<f64>,
    check_anchor: f64,
    checks_done: u64,
    last_t: Option<f64>,
}

impl D2dScheduler {
    pub fn new_active(params: D2dSchedulerParams) -> Self {
        Self::with_phase(params, Phase::Active, 0.0)
    }

    /// Initial state of the opportunistic modes: paused with an empty
    /// window, first resume check at `t0`.
    pub fn new_paused(params: D2dSchedulerParams, t0: f64) -> Self {
        Self::with_phase(params, Phase::Paused, t0)
    }

    fn with_phase(params: D2dSchedulerParams, phase: Phase, anchor: f64) -> Self {
        let cap = params.nb_rx;
        Self {
            params,
            phase,
            window: VecDeque::with_capacity(cap),
            below_counter: 0,
            current_avg: None,
            check_anchor: anchor,
            checks_done: 0,
            last_t: None,
        }
    }

    pub fn params(&self) -> &D2dSchedulerParams {
        &self.params
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn is_transmitting(&self) -> bool {
        self.phase == Phase::Active
    }

    pub fn current_avg(&self) -> Option<f64> {
        self.current_avg
    }

    pub fn below_counter(&self) -> u32 {
        self.below_counter
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    /// Next resume check while paused.
    pub fn next_check_at(&self) -> Option<f64> {
        (self.phase == Phase::Paused)
            .then_some(self.check_anchor + self.checks_done as f64 * self.params.t_d2d)
    }

    pub fn record(&self, t: f64, event: DecisionEvent) -> DecisionRecord {
        DecisionRecord {
            t,
            event,
            avg: self.current_avg,
            counter: self.below_counter,
            phase: self.phase,
            link: LinkTag::D2d,
        }
    }

    /// Feeds one RSSI sample from an ACK or a beacon. Returns the pause
    /// record when this sample pauses the link.
    pub fn observe(
        &mut self,
        t: f64,
        rssi_dbm: f64,
        source: SampleSource,
    ) -> Result<Option<DecisionRecord>> {
        if !matches!(source, SampleSource::DataAck | SampleSource::Beacon) {
            return Err(SimError::Protocol(format!(
                "D2D monitor only consumes ACK and beacon samples, got {source:?}"
            )));
        }
        if let Some(prev) = self.last_t {
            if t < prev {
                return Err(SimError::Ordering { t, previous: prev });
            }
        }
        self.last_t = Some(t);

        if self.window.len() == self.params.nb_rx {
            self.window.pop_front();
        }
        self.window.push_back(rssi_dbm);
        if self.window.len() == self.params.nb_rx {
            let sum: f64 = self.window.iter().sum();
            self.current_avg = Some(sum / self.params.nb_rx as f64);
        }

        if self.phase == Phase::Paused {
            return Ok(None);
        }
        let Some(avg) = self.current_avg else {
            return Ok(None);
        };
        if avg < self.params.rssi_thr {
            self.below_counter += 1;
        } else {
            self.below_counter = 0;
        }
        if self.below_counter >= self.params.nb_below_thr {
            self.phase = Phase::Paused;
            self.check_anchor = t;
            self.checks_done = 1;
            return Ok(Some(self.record(t, DecisionEvent::Pause)));
        }
        Ok(None)
    }

    /// Runs every resume check due at or before `now`. Returns the resume
    /// record, stamped with the check instant, when the link resumes.
    pub fn tick(&mut self, now: f64) -> Option<DecisionRecord> {
        self.run_checks(|c| c <= now)
    }

    /// Like [`tick`](Self::tick) but only runs checks strictly before `now`.
    pub fn tick_before(&mut self, now: f64) -> Option<DecisionRecord> {
        self.run_checks(|c| c < now)
    }

    fn run_checks(&mut self, due: impl Fn(f64) -> bool) -> Option<DecisionRecord> {
        while let Some(check_at) = self.next_check_at() {
            if !due(check_at) {
                break;
            }
            match self.current_avg {
                Some(avg) if avg >= self.params.rssi_thr => {
                    self.phase = Phase::Active;
                    self.below_counter = 0;
                    return Some(self.record(check_at, DecisionEvent::Resume));
                }
                _ => self.checks_done += 1,
            }
        }
        None
    }
}
