//! Plan-view geometry shared by every radio model: positions, buildings,
//! walking/driving traces and the line-of-sight test.

use serde::{Deserialize, Serialize};

/// A point on the plane, meters east (`x`) and north (`y`) of the scenario
/// origin. Scenarios put the base station at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(&self, other: &Position, f: f64) -> Position {
        Position::new(self.x + (other.x - self.x) * f, self.y + (other.y - self.y) * f)
    }
}

/// Axis-aligned rectangular building.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    pub min: Position,
    pub max: Position,
    /// Attenuation in dB added for each traversal of this obstacle.
    pub penetration_loss: f64,
}

impl Obstacle {
    /// Builds the rectangle spanned by two opposite corners.
    pub fn from_corners(a: Position, b: Position, penetration_loss: f64) -> Self {
        Self {
            min: Position::new(a.x.min(b.x), a.y.min(b.y)),
            max: Position::new(a.x.max(b.x), a.y.max(b.y)),
            penetration_loss,
        }
    }

    /// The four corners, counter-clockwise from the south-west one.
    pub fn corners(&self) -> [Position; 4] {
        [
            self.min,
            Position::new(self.max.x, self.min.y),
            self.max,
            Position::new(self.min.x, self.max.y),
        ]
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn contains(&self, p: &Position) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if !(self.min.is_finite() && self.max.is_finite()) {
            errs.push("obstacle corners must be finite".into());
        }
        if !(self.width() > 0.0 && self.height() > 0.0) {
            errs.push(format!(
                "obstacle is degenerate ({} x {} m)",
                self.width(),
                self.height()
            ));
        }
        if !(self.penetration_loss >= 0.0) {
            errs.push(format!("negative penetration loss {}", self.penetration_loss));
        }
        errs
    }

    /// Closed-rectangle test for the segment `a`-`b` (Liang-Barsky clipping).
    pub fn intersects_segment(&self, a: &Position, b: &Position) -> bool {
        let dx = b.x - a.x;
        let dy = b.y - a.y;
        let mut t0 = 0.0_f64;
        let mut t1 = 1.0_f64;
        let checks = [
            (-dx, a.x - self.min.x),
            (dx, self.max.x - a.x),
            (-dy, a.y - self.min.y),
            (dy, self.max.y - a.y),
        ];
        for (p, q) in checks {
            if p == 0.0 {
                if q < 0.0 {
                    return false;
                }
            } else {
                let r = q / p;
                if p < 0.0 {
                    if r > t1 {
                        return false;
                    }
                    t0 = t0.max(r);
                } else {
                    if r < t0 {
                        return false;
                    }
                    t1 = t1.min(r);
                }
            }
        }
        t0 <= t1
    }
}

/// A timestamped point of a mobility trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub t: f64,
    pub pos: Position,
}

impl Waypoint {
    pub const fn new(t: f64, x: f64, y: f64) -> Self {
        Self {
            t,
            pos: Position::new(x, y),
        }
    }
}

/// Piecewise-linear trajectory of one node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobilityTrace {
    pub waypoints: Vec<Waypoint>,
    /// Time at which the node leaves the building it starts in.
    #[serde(default)]
    pub indoor_until: Option<f64>,
}

impl MobilityTrace {
    pub fn fixed(pos: Position) -> Self {
        Self {
            waypoints: vec![Waypoint { t: 0.0, pos }],
            indoor_until: None,
        }
    }

    pub fn new(waypoints: Vec<Waypoint>) -> Self {
        Self {
            waypoints,
            indoor_until: None,
        }
    }

    /// Builds a trace that visits `points` in order at constant `speed`,
    /// starting at `t0`.
    pub fn constant_speed(t0: f64, points: &[Position], speed: f64) -> Self {
        let mut t = t0;
        let mut waypoints = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if i > 0 {
                t += points[i - 1].distance(p) / speed;
            }
            waypoints.push(Waypoint { t, pos: *p });
        }
        Self::new(waypoints)
    }

    pub fn start(&self) -> Position {
        self.waypoints[0].pos
    }

    pub fn end_time(&self) -> f64 {
        self.waypoints.last().map(|w| w.t).unwrap_or(0.0)
    }

    pub fn is_indoor(&self, t: f64) -> bool {
        self.indoor_until.is_some_and(|until| t < until)
    }

    /// Position at time `t`: linear interpolation between the bracketing
    /// waypoints, clamped to the first/last waypoint outside the trace.
    pub fn position_at(&self, t: f64) -> Position {
        let wps = &self.waypoints;
        let first = wps[0];
        if t <= first.t {
            return first.pos;
        }
        let last = wps[wps.len() - 1];
        if t >= last.t {
            return last.pos;
        }
        // first index whose time is > t; guaranteed in 1..len
        let hi = wps.partition_point(|w| w.t <= t);
        let (a, b) = (wps[hi - 1], wps[hi]);
        if t == a.t {
            return a.pos;
        }
        a.pos.lerp(&b.pos, (t - a.t) / (b.t - a.t))
    }

    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if self.waypoints.is_empty() {
            errs.push("mobility trace has no waypoints".into());
            return errs;
        }
        for w in &self.waypoints {
            if !(w.t >= 0.0) || !w.pos.is_finite() {
                errs.push(format!("invalid waypoint at t={}", w.t));
            }
        }
        for pair in self.waypoints.windows(2) {
            if !(pair[1].t > pair[0].t) {
                errs.push(format!(
                    "waypoint times not strictly increasing ({} then {})",
                    pair[0].t, pair[1].t
                ));
            }
        }
        if let Some(u) = self.indoor_until {
            if !(u >= 0.0) {
                errs.push(format!("indoor_until must be non-negative, got {u}"));
            }
        }
        errs
    }
}

/// Free-function form of [`MobilityTrace::position_at`].
pub fn position_at(trace: &MobilityTrace, t: f64) -> Position {
    trace.position_at(t)
}

/// Outcome of a line-of-sight test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LosCheck {
    pub los: bool,
    /// Sum of penetration losses of the obstacles crossed (0 under LOS).
    pub penetration_db: f64,
}

/// `los` is true iff the segment `a`-`b` crosses no obstacle.
pub fn is_los(a: &Position, b: &Position, obstacles: &[Obstacle]) -> LosCheck {
    // Canonical endpoint order keeps the result exactly symmetric.
    let (p, q) = if (a.x, a.y) <= (b.x, b.y) { (a, b) } else { (b, a) };
    let mut penetration_db = 0.0;
    let mut los = true;
    for o in obstacles {
        if o.intersects_segment(p, q) {
            los = false;
            penetration_db += o.penetration_loss;
        }
    }
    LosCheck {
        los,
        penetration_db,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Source,
    Relay,
    BaseStation,
    Server,
}

/// How a device is carried; determines cabin loss and fading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mount {
    #[default]
    Handheld,
    InVehicleCabin,
    VehicleRoof,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: String,
    pub role: Role,
    pub trace: MobilityTrace,
    #[serde(default)]
    pub mount: Mount,
}

impl NodeSpec {
    pub fn new(id: &str, role: Role, trace: MobilityTrace, mount: Mount) -> Self {
        Self {
            id: id.to_string(),
            role,
            trace,
            mount,
        }
    }
}
