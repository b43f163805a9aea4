//! Post-hoc check of a run's decision logs against its data TTIs.
//!
//! The D2D monitor may pause on an ACK received inside a TTI that already
//! carried data, so a D2D data TTI conflicts with a pause at `p` and the
//! following resume at `r` iff `p < t < r`. Cellular evaluation runs before
//! any data is moved, so there the conflict is `p <= t < r`. Opportunistic
//! modes start paused, as if a pause had happened before t = 0.

use crate::engine::{Mode, RunOutput};
use crate::sched::{CellSchedulerParams, D2dSchedulerParams, DecisionEvent, DecisionLog, Phase};

const T_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AuditReport {
    pub violations: Vec<String>,
    pub d2d_transitions: usize,
    pub cell_transitions: usize,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Paused intervals `(start, end)`; `start` is `-inf` for the initial pause
/// and `end` is `+inf` when the link never resumed.
fn paused_intervals(log: &DecisionLog, starts_paused: bool) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut open = starts_paused.then_some(f64::NEG_INFINITY);
    for r in log.transitions() {
        match r.event {
            DecisionEvent::Pause => open = open.or(Some(r.t)),
            DecisionEvent::Resume => {
                if let Some(s) = open.take() {
                    out.push((s, r.t));
                }
            }
            DecisionEvent::Observe => {}
        }
    }
    if let Some(s) = open {
        out.push((s, f64::INFINITY));
    }
    out
}

fn check_alternation(log: &DecisionLog, starts_paused: bool, name: &str, v: &mut Vec<String>) {
    let mut paused = starts_paused;
    for r in log.transitions() {
        let ok = match r.event {
            DecisionEvent::Pause => !paused,
            DecisionEvent::Resume => paused,
            DecisionEvent::Observe => true,
        };
        if !ok {
            v.push(format!("{name}: {} at t={} does not alternate", r.event.as_str(), r.t));
        }
        paused = r.event == DecisionEvent::Pause;
    }
}

fn check_data(
    ttis: &[u32],
    tti_s: f64,
    intervals: &[(f64, f64)],
    inclusive_start: bool,
    name: &str,
    v: &mut Vec<String>,
) {
    // both lists are sorted, so a merge walk is enough
    let mut i = 0;
    for &k in ttis {
        let t = k as f64 * tti_s;
        while i < intervals.len() && intervals[i].1 <= t + T_TOL {
            i += 1;
        }
        let Some(&(s, e)) = intervals.get(i) else {
            break;
        };
        let after_start = if inclusive_start { t >= s - T_TOL } else { t > s + T_TOL };
        if after_start && t < e - T_TOL {
            v.push(format!("{name}: data in TTI {k} (t={t}) while paused from {s} to {e}"));
        }
    }
}

fn check_d2d_events(log: &DecisionLog, p: &D2dSchedulerParams, v: &mut Vec<String>) {
    // resume checks fall on anchor + k * t_d2d; the first anchor is t = 0
    let mut anchor = 0.0;
    for r in log.transitions() {
        let bad = |what: &str| format!("d2d {} at t={}: {what} ({r})", r.event.as_str(), r.t);
        match r.event {
            DecisionEvent::Pause => {
                if !r.avg.is_some_and(|a| a < p.rssi_thr) {
                    v.push(bad("average not strictly below rssi_thr"));
                }
                if r.counter < p.nb_below_thr {
                    v.push(bad("below-threshold counter not reached"));
                }
                if r.phase != Phase::Paused {
                    v.push(bad("record not in paused phase"));
                }
                anchor = r.t;
            }
            DecisionEvent::Resume => {
                if !r.avg.is_some_and(|a| a >= p.rssi_thr) {
                    v.push(bad("average below rssi_thr"));
                }
                if r.phase != Phase::Active {
                    v.push(bad("record not in active phase"));
                }
                let k = (r.t - anchor) / p.t_d2d;
                if k < -T_TOL || (k - k.round()).abs() > T_TOL {
                    v.push(bad("not on the resume-check grid"));
                }
            }
            DecisionEvent::Observe => {}
        }
    }
}

fn check_cell_events(log: &DecisionLog, p: &CellSchedulerParams, v: &mut Vec<String>) {
    for r in log.transitions() {
        let bad = |what: &str| format!("cell {} at t={}: {what} ({r})", r.event.as_str(), r.t);
        match r.event {
            DecisionEvent::Pause => {
                if !r.avg.is_some_and(|a| a < p.itbs_thr as f64) {
                    v.push(bad("I_TBS average not strictly below itbs_thr"));
                }
                if r.phase != Phase::Paused {
                    v.push(bad("record not in paused phase"));
                }
            }
            DecisionEvent::Resume => {
                if !r.avg.is_some_and(|a| a > p.rsrp_thr) {
                    v.push(bad("RSRP average not strictly above rsrp_thr"));
                }
                if r.phase != Phase::Active {
                    v.push(bad("record not in active phase"));
                }
            }
            DecisionEvent::Observe => {}
        }
    }
}

/// Audits one run produced with the given scheduler parameters.
pub fn audit(
    out: &RunOutput,
    d2d: &D2dSchedulerParams,
    cell: &CellSchedulerParams,
) -> AuditReport {
    let mode: Mode = out.result.mode;
    let logs = &out.logs;
    let mut v = Vec::new();
    let opp = mode.is_opportunistic();

    if !opp && (!logs.d2d.records.is_empty() || !logs.cell.records.is_empty()) {
        v.push(format!("{mode} is not opportunistic but logged scheduler decisions"));
    }
    if !mode.uses_relay() && !logs.d2d_data_ttis.is_empty() {
        v.push(format!("{mode} has no relay but moved D2D data"));
    }
    let d2d_gated = opp && mode.uses_relay();
    if d2d_gated {
        check_alternation(&logs.d2d, true, "d2d", &mut v);
        check_d2d_events(&logs.d2d, d2d, &mut v);
        let iv = paused_intervals(&logs.d2d, true);
        check_data(&logs.d2d_data_ttis, logs.tti_s, &iv, false, "d2d", &mut v);
    }
    if opp {
        check_alternation(&logs.cell, true, "cell", &mut v);
        check_cell_events(&logs.cell, cell, &mut v);
        let iv = paused_intervals(&logs.cell, true);
        check_data(&logs.cell_data_ttis, logs.tti_s, &iv, true, "cell", &mut v);
    }
    let cell_time = logs.cell_data_ttis.len() as f64 * logs.tti_s;
    if (cell_time - out.result.cellular_time).abs() > T_TOL {
        v.push(format!(
            "cellular_time {} disagrees with {} logged grant TTIs",
            out.result.cellular_time,
            logs.cell_data_ttis.len()
        ));
    }
    let count = |l: &DecisionLog| l.transitions().count();
    AuditReport {
        violations: v,
        d2d_transitions: count(&logs.d2d),
        cell_transitions: count(&logs.cell),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sched::{DecisionRecord, LinkTag};

    fn log_of(records: &[DecisionRecord]) -> DecisionLog {
        DecisionLog {
            records: records.to_vec(),
        }
    }

    fn rec(t: f64, event: DecisionEvent, avg: f64, link: LinkTag) -> DecisionRecord {
        DecisionRecord {
            t,
            event,
            avg: Some(avg),
            counter: 3,
            phase: if event == DecisionEvent::Pause { Phase::Paused } else { Phase::Active },
            link,
        }
    }

    #[test]
    fn intervals_and_boundaries() {
        let log = log_of(&[
            rec(2.0, DecisionEvent::Resume, -60.0, LinkTag::D2d),
            rec(5.0, DecisionEvent::Pause, -75.0, LinkTag::D2d),
        ]);
        let iv = paused_intervals(&log, true);
        assert_eq!(iv, vec![(f64::NEG_INFINITY, 2.0), (5.0, f64::INFINITY)]);

        let mut v = Vec::new();
        // 2.0 is the resume instant, 5.0 the pause TTI itself
        check_data(&[2000, 3000, 5000], 1e-3, &iv, false, "d2d", &mut v);
        assert!(v.is_empty(), "{v:?}");
        check_data(&[1999], 1e-3, &iv, false, "d2d", &mut v);
        check_data(&[5001], 1e-3, &iv, false, "d2d", &mut v);
        assert_eq!(v.len(), 2);

        let mut v = Vec::new();
        check_data(&[5000], 1e-3, &iv, true, "cell", &mut v);
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn event_conditions() {
        let p = D2dSchedulerParams::default();
        let mut v = Vec::new();
        let log = log_of(&[
            rec(3.0, DecisionEvent::Resume, -70.0, LinkTag::D2d),
            rec(4.2, DecisionEvent::Pause, -70.0, LinkTag::D2d),
            rec(5.7, DecisionEvent::Resume, -65.0, LinkTag::D2d),
        ]);
        check_d2d_events(&log, &p, &mut v);
        // the pause at exactly -70 is not strictly below; 5.7 is off the 4.2 + k grid
        assert_eq!(v.len(), 2, "{v:?}");

        let c = CellSchedulerParams::default();
        let mut v = Vec::new();
        let log = log_of(&[
            rec(1.0, DecisionEvent::Resume, -80.0, LinkTag::Cell),
            rec(2.0, DecisionEvent::Pause, 17.9, LinkTag::Cell),
        ]);
        check_cell_events(&log, &c, &mut v);
        assert_eq!(v.len(), 1, "{v:?}");
    }

    #[test]
    fn alternation() {
        let mut v = Vec::new();
        let log = log_of(&[
            rec(1.0, DecisionEvent::Pause, 10.0, LinkTag::Cell),
            rec(2.0, DecisionEvent::Pause, 10.0, LinkTag::Cell),
        ]);
        check_alternation(&log, false, "cell", &mut v);
        assert_eq!(v.len(), 1);
    }
}
