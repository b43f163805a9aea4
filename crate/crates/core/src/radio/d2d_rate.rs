use serde::{Deserialize, Serialize};

/// 802.11a/g rate adaptation: the highest rate whose RSSI threshold is met,
/// never below the base rate while associated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct D2dRateTable {
    /// `(rssi_threshold_dbm, rate_mbps)`, ascending in both.
    pub steps: Vec<(f64, f64)>,
    /// Fraction of the PHY rate left after MAC overheads, in (0, 1].
    pub mac_efficiency: f64,
}

impl Default for D2dRateTable {
    fn default() -> Self {
        Self {
            steps: vec![
                (-82.0, 6.0),
                (-81.0, 9.0),
                (-79.0, 12.0),
                (-77.0, 18.0),
                (-74.0, 24.0),
                (-70.0, 36.0),
                (-66.0, 48.0),
                (-65.0, 54.0),
            ],
            mac_efficiency: 0.6,
        }
    }
}

impl D2dRateTable {
    fn index(&self, rssi_dbm: f64) -> usize {
        self.steps
            .partition_point(|s| s.0 <= rssi_dbm)
            .saturating_sub(1)
    }

    /// Effective throughput in bits per second.
    pub fn rate_bps(&self, rssi_dbm: f64) -> f64 {
        self.steps[self.index(rssi_dbm)].1 * 1e6 * self.mac_efficiency
    }

    /// RSSI threshold of the rate selected at `rssi_dbm`; block-error
    /// margins are measured against it.
    pub fn sensitivity(&self, rssi_dbm: f64) -> f64 {
        self.steps[self.index(rssi_dbm)].0
    }

    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if self.steps.is_empty() {
            errs.push("rate table is empty".into());
        }
        for w in self.steps.windows(2) {
            if !(w[1].0 > w[0].0 && w[1].1 > w[0].1) {
                errs.push(format!("rate table not increasing at {:?}", w[1]));
            }
        }
        if !(self.mac_efficiency > 0.0 && self.mac_efficiency <= 1.0) {
            errs.push(format!("mac efficiency {} outside (0,1]", self.mac_efficiency));
        }
        errs
    }
}
