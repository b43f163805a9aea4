use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::radio::MAX_ITBS;
use crate::sched::{DecisionEvent, DecisionRecord, LinkTag, Phase, TIME_EPS};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSchedulerParams {
    /// Pause when the windowed I_TBS average falls strictly below this.
    pub itbs_thr: u8,
    /// Resume when the windowed RSRP average rises strictly above this, dBm.
    pub rsrp_thr: f64,
    /// Averaging horizon, seconds.
    pub t_cell_avg: f64,
    /// RSRP sampling period while paused, seconds.
    pub rsrp_period: f64,
}

impl Default for CellSchedulerParams {
    fn default() -> Self {
        Self {
            itbs_thr: 18,
            rsrp_thr: -80.0,
            t_cell_avg: 1.0,
            rsrp_period: 0.005,
        }
    }
}

impl CellSchedulerParams {
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if self.itbs_thr > MAX_ITBS {
            errs.push(format!("itbs_thr {} outside 0..={MAX_ITBS}", self.itbs_thr));
        }
        if !(self.t_cell_avg > 0.0) {
            errs.push("t_cell_avg must be positive".into());
        }
        if !(self.rsrp_period > 0.0) {
            errs.push("rsrp_period must be positive".into());
        }
        if !self.rsrp_thr.is_finite() {
            errs.push("rsrp_thr must be finite".into());
        }
        errs
    }
}

/// Trailing time window of samples. A sample at `ts` is retained at
/// reference time `t` iff `ts >= t - horizon`; the window is full once
/// sampling has run for at least `horizon` since the last reset.
#[derive(Clone, Debug)]
struct TimeWindow<T> {
    samples: VecDeque<(f64, T)>,
    since: Option<f64>,
    last_t: Option<f64>,
}

impl<T: Copy> TimeWindow<T> {
    fn new() -> Self {
        Self {
            samples: VecDeque::new(),
            since: None,
            last_t: None,
        }
    }

    fn push(&mut self, t: f64, v: T, horizon: f64) -> Result<()> {
        if let Some(prev) = self.last_t {
            if t < prev {
                return Err(SimError::Ordering { t, previous: prev });
            }
        }
        self.last_t = Some(t);
        self.since.get_or_insert(t);
        self.samples.push_back((t, v));
        self.evict(t, horizon);
        Ok(())
    }

    fn evict(&mut self, t: f64, horizon: f64) {
        while let Some(&(ts, _)) = self.samples.front() {
            if ts < t - horizon - TIME_EPS {
                self.samples.pop_front();
            } else {
                break;
            }
        }
    }

    fn is_full(&self, t: f64, horizon: f64) -> bool {
        self.since.is_some_and(|s| t - s >= horizon - TIME_EPS)
    }

    fn clear(&mut self) {
        self.samples.clear();
        self.since = None;
    }

    fn len(&self) -> usize {
        self.samples.len()
    }
}

/// Grant- and RSRP-driven pause/resume machine of the uplink cellular link.
///
/// While active it averages granted I_TBS values; while paused (no grants
/// exist) it averages downlink RSRP. Both windows must span the full
/// horizon before a transition, and both comparisons are strict.
#[derive(Clone, Debug)]
pub struct CellScheduler {
    params: CellSchedulerParams,
    phase: Phase,
    itbs: TimeWindow<u8>,
    rsrp: TimeWindow<f64>,
}

impl CellScheduler {
    pub fn new(params: CellSchedulerParams, phase: Phase) -> Self {
        Self {
            params,
            phase,
            itbs: TimeWindow::new(),
            rsrp: TimeWindow::new(),
        }
    }

    pub fn params(&self) -> &CellSchedulerParams {
        &self.params
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn is_transmitting(&self) -> bool {
        self.phase == Phase::Active
    }

    pub fn itbs_avg(&self) -> Option<f64> {
        if self.itbs.len() == 0 {
            return None;
        }
        let sum: u64 = self.itbs.samples.iter().map(|&(_, v)| v as u64).sum();
        Some(sum as f64 / self.itbs.len() as f64)
    }

    pub fn rsrp_avg(&self) -> Option<f64> {
        if self.rsrp.len() == 0 {
            return None;
        }
        let sum: f64 = self.rsrp.samples.iter().map(|&(_, v)| v).sum();
        Some(sum / self.rsrp.len() as f64)
    }

    pub fn record(&self, t: f64, event: DecisionEvent) -> DecisionRecord {
        let (avg, counter) = match self.phase {
            Phase::Active => (self.itbs_avg(), self.itbs.len()),
            Phase::Paused => (self.rsrp_avg(), self.rsrp.len()),
        };
        DecisionRecord {
            t,
            event,
            avg,
            counter: counter as u32,
            phase: self.phase,
            link: LinkTag::Cell,
        }
    }

    /// Records a DCI grant. Grants only exist while transmitting.
    pub fn observe_grant(&mut self, itbs: u8, t: f64) -> Result<()> {
        if self.phase == Phase::Paused {
            return Err(SimError::Protocol(format!(
                "uplink grant observed at t={t} while the cellular link is paused"
            )));
        }
        if itbs > MAX_ITBS {
            return Err(SimError::Range(format!("granted i_tbs {itbs} > {MAX_ITBS}")));
        }
        self.itbs.push(t, itbs, self.params.t_cell_avg)
    }

    pub fn observe_rsrp(&mut self, rsrp_dbm: f64, t: f64) -> Result<()> {
        self.rsrp.push(t, rsrp_dbm, self.params.t_cell_avg)
    }

    /// Once-per-TTI decision. Returns the transition record, if any, stamped
    /// with the averages that justified it.
    pub fn evaluate(&mut self, t: f64) -> Option<DecisionRecord> {
        let horizon = self.params.t_cell_avg;
        self.itbs.evict(t, horizon);
        self.rsrp.evict(t, horizon);
        match self.phase {
            Phase::Active => {
                if !self.itbs.is_full(t, horizon) {
                    return None;
                }
                let avg = self.itbs_avg()?;
                if avg < self.params.itbs_thr as f64 {
                    let rec = DecisionRecord {
                        phase: Phase::Paused,
                        ..self.record(t, DecisionEvent::Pause)
                    };
                    self.phase = Phase::Paused;
                    self.itbs.clear();
                    self.rsrp.clear();
                    return Some(rec);
                }
                None
            }
            Phase::Paused => {
                if !self.rsrp.is_full(t, horizon) {
                    return None;
                }
                let avg = self.rsrp_avg()?;
                if avg > self.params.rsrp_thr {
                    let rec = DecisionRecord {
                        phase: Phase::Active,
                        ..self.record(t, DecisionEvent::Resume)
                    };
                    self.phase = Phase::Active;
                    self.itbs.clear();
                    self.rsrp.clear();
                    return Some(rec);
                }
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> CellSchedulerParams {
        CellSchedulerParams::default()
    }

    #[test]
    fn grant_average_is_the_mean() {
        let mut s = CellScheduler::new(params(), Phase::Active);
        for (i, g) in [18u8, 20, 22].into_iter().enumerate() {
            s.observe_grant(g, i as f64 * 0.1).unwrap();
        }
        assert_eq!(s.itbs_avg(), Some(20.0));
    }

    #[test]
    fn old_grants_are_evicted() {
        let mut s = CellScheduler::new(params(), Phase::Active);
        s.observe_grant(10, 0.0).unwrap();
        s.observe_grant(20, 1.5).unwrap();
        assert_eq!(s.itbs_avg(), Some(20.0));
    }

    #[test]
    fn grant_while_paused_is_a_protocol_error() {
        let mut s = CellScheduler::new(params(), Phase::Paused);
        assert!(matches!(s.observe_grant(18, 0.0), Err(SimError::Protocol(_))));
    }

    #[test]
    fn rsrp_averages() {
        let mut s = CellScheduler::new(params(), Phase::Paused);
        assert_eq!(s.rsrp_avg(), None);
        s.observe_rsrp(-75.0, 0.0).unwrap();
        assert_eq!(s.rsrp_avg(), Some(-75.0));
        s.observe_rsrp(-80.0, 0.1).unwrap();
        s.observe_rsrp(-70.0, 0.2).unwrap();
        s.observe_rsrp(-75.0, 0.3).unwrap();
        assert_eq!(s.rsrp_avg(), Some(-75.0));
    }

    #[test]
    fn empty_history_cannot_resume() {
        let mut s = CellScheduler::new(params(), Phase::Paused);
        for k in 0..3000 {
            assert!(s.evaluate(k as f64 * 1e-3).is_none());
        }
    }

    fn feed_grants(s: &mut CellScheduler, values: impl Fn(usize) -> u8, n: usize) {
        for k in 0..n {
            s.observe_grant(values(k), k as f64 * 1e-3).unwrap();
        }
    }

    #[test]
    fn pauses_strictly_below_threshold() {
        // alternating 17/18 with one extra 17 averages below 18 but above 17.9
        let mut s = CellScheduler::new(params(), Phase::Active);
        feed_grants(&mut s, |k| if k % 10 == 0 { 17 } else { 18 }, 1001);
        let avg = s.itbs_avg().unwrap();
        assert!((17.89..18.0).contains(&avg), "{avg}");
        let ev = s.evaluate(1.0).unwrap();
        assert_eq!(ev.event, DecisionEvent::Pause);
        assert!(!s.is_transmitting());
    }

    #[test]
    fn stays_active_at_threshold() {
        let mut s = CellScheduler::new(params(), Phase::Active);
        feed_grants(&mut s, |_| 18, 1001);
        assert!(s.evaluate(1.0).is_none());
    }

    #[test]
    fn no_decision_on_partial_window() {
        let mut s = CellScheduler::new(params(), Phase::Active);
        feed_grants(&mut s, |_| 3, 500);
        assert!(s.evaluate(0.499).is_none());
        assert!(s.is_transmitting());
    }

    fn paused_with(avg: f64) -> CellScheduler {
        let mut s = CellScheduler::new(params(), Phase::Paused);
        for k in 0..=200 {
            s.observe_rsrp(avg, k as f64 * 0.005).unwrap();
        }
        s
    }

    #[test]
    fn resumes_strictly_above_threshold() {
        let mut s = paused_with(-79.0);
        let ev = s.evaluate(1.0).unwrap();
        assert_eq!(ev.event, DecisionEvent::Resume);
        assert_eq!(ev.avg, Some(-79.0));
        assert!(s.is_transmitting());
    }

    #[test]
    fn stays_paused_at_threshold() {
        let mut s = paused_with(-80.0);
        assert!(s.evaluate(1.0).is_none());
        assert!(!s.is_transmitting());
    }

    #[test]
    fn resume_clears_grant_history() {
        let mut s = paused_with(-70.0);
        s.evaluate(1.0).unwrap();
        assert_eq!(s.itbs_avg(), None);
        s.observe_grant(3, 1.001).unwrap();
        // a fresh window must fill before the low grant can pause the link
        assert!(s.evaluate(1.5).is_none());
    }
}
