//! Opportunistic pause/resume state machines for the D2D and cellular
//! hops, plus the decision-log record both of them emit.

mod cell;
mod d2d;
mod log;

pub use cell::{CellScheduler, CellSchedulerParams};
pub use d2d::{D2dScheduler, D2dSchedulerParams};
pub use log::{DecisionEvent, DecisionLog, DecisionRecord, LinkTag};

use serde::{Deserialize, Serialize};

/// Tolerance used for every time comparison inside the schedulers.
pub const TIME_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Active,
    Paused,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Active => "active",
            Phase::Paused => "paused",
        }
    }
}

/// Where a link-quality sample came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    DataAck,
    Beacon,
    Dci,
    ReferenceSignal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    D2dRssi,
    CellRsrp,
    CellItbsGrant,
}

/// One timestamped link-quality observation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkSample {
    pub t: f64,
    pub kind: SampleKind,
    /// dBm for power kinds, the index for grants.
    pub value: f64,
    pub source: SampleSource,
}
