use std::fmt;
use std::str::FromStr;

use crate::error::SimError;
use crate::sched::Phase;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecisionEvent {
    Pause,
    Resume,
    Observe,
}

impl DecisionEvent {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecisionEvent::Pause => "pause",
            DecisionEvent::Resume => "resume",
            DecisionEvent::Observe => "observe",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkTag {
    D2d,
    Cell,
}

/// One line of a decision log:
/// `t_s event avg counter phase`, with a trailing `link=cell` on
/// cellular records. An undefined average prints as `-`.
///
/// For D2D records `counter` is the below-threshold counter; for cellular
/// records it is the number of samples in the averaging window, and `avg`
/// is the I_TBS average while active and the RSRP average while paused.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecisionRecord {
    pub t: f64,
    pub event: DecisionEvent,
    pub avg: Option<f64>,
    pub counter: u32,
    pub phase: Phase,
    pub link: LinkTag,
}

impl fmt::Display for DecisionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} ", self.t, self.event.as_str())?;
        match self.avg {
            Some(a) => write!(f, "{a}")?,
            None => write!(f, "-")?,
        }
        write!(f, " {} {}", self.counter, self.phase.as_str())?;
        if self.link == LinkTag::Cell {
            write!(f, " link=cell")?;
        }
        Ok(())
    }
}

impl FromStr for DecisionRecord {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let f: Vec<&str> = s.split_whitespace().collect();
        if !(f.len() == 5 || f.len() == 6) {
            return Err(format!("expected 5 or 6 fields, got {}", f.len()));
        }
        let t: f64 = f[0].parse().map_err(|e| format!("bad time: {e}"))?;
        let event = match f[1] {
            "pause" => DecisionEvent::Pause,
            "resume" => DecisionEvent::Resume,
            "observe" => DecisionEvent::Observe,
            other => return Err(format!("unknown event `{other}`")),
        };
        let avg = match f[2] {
            "-" => None,
            v => Some(v.parse().map_err(|e| format!("bad average: {e}"))?),
        };
        let counter = f[3].parse().map_err(|e| format!("bad counter: {e}"))?;
        let phase = match f[4] {
            "active" => Phase::Active,
            "paused" => Phase::Paused,
            other => return Err(format!("unknown phase `{other}`")),
        };
        let link = match f.get(5) {
            None | Some(&"link=d2d") => LinkTag::D2d,
            Some(&"link=cell") => LinkTag::Cell,
            Some(other) => return Err(format!("unknown link tag `{other}`")),
        };
        Ok(Self {
            t,
            event,
            avg,
            counter,
            phase,
            link,
        })
    }
}

/// Ordered decision records of one link.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DecisionLog {
    pub records: Vec<DecisionRecord>,
}

impl DecisionLog {
    pub fn push(&mut self, r: DecisionRecord) {
        self.records.push(r);
    }

    /// Pause and resume records only.
    pub fn transitions(&self) -> impl Iterator<Item = &DecisionRecord> {
        self.records
            .iter()
            .filter(|r| r.event != DecisionEvent::Observe)
    }

    pub fn write_to<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in &self.records {
            writeln!(w, "{r}")?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, SimError> {
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            records.push(line.parse().map_err(|msg| SimError::Parse { line: i + 1, msg })?);
        }
        Ok(Self { records })
    }
}
