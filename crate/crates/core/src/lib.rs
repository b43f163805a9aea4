// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod cli;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod radio;
pub mod replay;
pub mod report;
pub mod scenarios;
pub mod sched;
pub mod transfer;

pub use engine::{run, Mode, RunOutput, RunResult};
pub use error::{Result, SimError};
pub use scenarios::Scenario;
