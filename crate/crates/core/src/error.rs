use thiserror::Error;

/// Errors surfaced by the simulator, the scheduler replay tool and the
/// report writers.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("degenerate geometry: link distance {distance_m:.3} m is below the reference distance {d0_m} m")]
    DegenerateGeometry { distance_m: f64, d0_m: f64 },

    #[error("value out of range: {0}")]
    Range(String),

    #[error("sample ordering violated: t={t} precedes previous sample at t={previous}")]
    Ordering { t: f64, previous: f64 },

    #[error("protocol violation: {0}")]
    Protocol(String),

    #[error("invariant breached at t={t:.3}s: {what}")]
    Invariant { t: f64, what: String },

    #[error("accounting error: {0}")]
    Accounting(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid TBS table: {0}")]
    TbsTable(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("scenario validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("bad override `{key}`: {msg}")]
    Override { key: String, msg: String },

    #[error("statistics: {0}")]
    Stats(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;

impl SimError {
    /// Broad class used for the process exit code.
    pub fn category(&self) -> &'static str {
        match self {
            SimError::Parse { .. }
            | SimError::UnknownScenario(_)
            | SimError::Validation(_)
            | SimError::Override { .. } => "config",
            SimError::Io(_) => "io",
            SimError::Stats(_) => "stats",
            SimError::DegenerateGeometry { .. }
            | SimError::Range(_)
            | SimError::Ordering { .. }
            | SimError::Protocol(_)
            | SimError::Invariant { .. }
            | SimError::Accounting(_)
            | SimError::TbsTable(_) => "simulation",
        }
    }

    /// 3 config, 4 io, 5 simulation, 6 stats. Usage errors exit with 2.
    pub fn exit_code(&self) -> i32 {
        match self.category() {
            "config" => 3,
            "io" => 4,
            "simulation" => 5,
            _ => 6,
        }
    }
}
