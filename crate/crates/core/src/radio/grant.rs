use serde::{Deserialize, Serialize};

/// Highest transport block size index.
pub const MAX_ITBS: u8 = 26;

/// One step of the grant map: RSRP at or above `rsrp_dbm` earns `itbs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub rsrp_dbm: f64,
    pub itbs: u8,
}

/// Memoryless model of the base station's uplink link adaptation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrantPolicy {
    /// Sorted by RSRP; both columns non-decreasing.
    pub breakpoints: Vec<Breakpoint>,
    /// PRBs granted in every scheduled TTI.
    pub n_prb: u32,
}

impl GrantPolicy {
    /// Piecewise-linear map through (`anchor_dbm`, `anchor_itbs`): one index
    /// per `step_above` dB above the anchor and per `step_below` dB below it.
    pub fn piecewise_linear(
        anchor_dbm: f64,
        anchor_itbs: u8,
        step_above: f64,
        step_below: f64,
        n_prb: u32,
    ) -> Self {
        let breakpoints = (1..=MAX_ITBS)
            .map(|itbs| {
                let delta = itbs as f64 - anchor_itbs as f64;
                let step = if delta >= 0.0 { step_above } else { step_below };
                Breakpoint {
                    rsrp_dbm: anchor_dbm + delta * step,
                    itbs,
                }
            })
            .collect();
        Self { breakpoints, n_prb }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        for w in self.breakpoints.windows(2) {
            if !(w[1].rsrp_dbm >= w[0].rsrp_dbm) || w[1].itbs < w[0].itbs {
                errs.push(format!(
                    "grant map not monotone between {:?} and {:?}",
                    w[0], w[1]
                ));
            }
        }
        if self.n_prb == 0 || self.n_prb > super::MAX_TABLE_PRB {
            errs.push(format!(
                "n_prb {} outside 1..={}",
                self.n_prb,
                super::MAX_TABLE_PRB
            ));
        }
        for b in &self.breakpoints {
            if b.itbs > MAX_ITBS || !b.rsrp_dbm.is_finite() {
                errs.push(format!("invalid grant breakpoint {b:?}"));
            }
        }
        errs
    }

    /// Lowest RSRP that earns at least `itbs`; `-inf` for index 0.
    pub fn threshold(&self, itbs: u8) -> f64 {
        if itbs == 0 {
            return f64::NEG_INFINITY;
        }
        self.breakpoints
            .iter()
            .find(|b| b.itbs >= itbs)
            .map(|b| b.rsrp_dbm)
            .unwrap_or(f64::INFINITY)
    }

    /// RSRP at which blocks sent with `itbs` decode half the time. Index 0
    /// has no grant threshold, so its value is extrapolated one step below
    /// index 1.
    pub fn decode_threshold(&self, itbs: u8) -> f64 {
        if itbs > 0 || self.breakpoints.len() < 2 {
            return self.threshold(itbs.max(1));
        }
        let (a, b) = (self.breakpoints[0].rsrp_dbm, self.breakpoints[1].rsrp_dbm);
        a - (b - a)
    }

    pub fn grant(&self, rsrp_dbm: f64) -> u8 {
        let n = self.breakpoints.partition_point(|b| b.rsrp_dbm <= rsrp_dbm);
        if n == 0 {
            0
        } else {
            self.breakpoints[n - 1].itbs.min(MAX_ITBS)
        }
    }
}

/// Granted I_TBS for a measured RSRP.
pub fn grant_itbs(rsrp_dbm: f64, policy: &GrantPolicy) -> u8 {
    policy.grant(rsrp_dbm)
}
