//! Built-in trial sites and test fixtures, the shipped calibration, and
//! `dotted.path = value` overrides.
//!
//! Every scenario puts its base station at the origin. Distances quoted in
//! the site descriptions are reproduced exactly by the waypoints below;
//! street layout, speeds and link budgets are calibration defaults.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Result, SimError};
use crate::geometry::{MobilityTrace, Mount, NodeSpec, Obstacle, Position, Role, Waypoint};
use crate::radio::{BlockErrorModel, D2dRateTable, GrantPolicy, LinkBudget, PathLossParams, TbsTable};
use crate::sched::{CellSchedulerParams, D2dSchedulerParams};
use crate::transfer::TransferParams;

pub const PEDESTRIAN_SPEED: f64 = 1.4;
pub const VEHICLE_SPEED: f64 = 8.3;
/// Speed of the relay car once it trails the pedestrian in `veh_nlos`.
pub const FOLLOW_SPEED: f64 = 3.0;
/// Distance between a walking line and the building face it runs along.
pub const SIDEWALK_OFFSET: f64 = 1.5;
/// Indoor walk before reaching the entrance in the indoor-to-outdoor sites.
pub const INDOOR_DEPTH: f64 = 40.0;
/// Walk from the first `veh_nlos` position to the intersection.
pub const VEH_NLOS_WALK: f64 = 120.0;

pub const SCENARIO_IDS: [&str; 9] = [
    "outdoor_640",
    "outdoor_280",
    "umh1",
    "umh2",
    "sc",
    "veh_los",
    "veh_nlos",
    "perfect_link",
    "always_nlos",
];

/// Scenarios reconstructing field trials (the fixtures excluded).
pub const TRIAL_SCENARIOS: [&str; 7] = [
    "outdoor_640",
    "outdoor_280",
    "umh1",
    "umh2",
    "sc",
    "veh_los",
    "veh_nlos",
];

/// Fast-fading standard deviation per device mount, dB.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FadingSigmas {
    pub handheld: f64,
    pub in_vehicle_cabin: f64,
    pub vehicle_roof: f64,
}

impl FadingSigmas {
    pub fn for_mount(&self, mount: Mount) -> f64 {
        match mount {
            Mount::Handheld => self.handheld,
            Mount::InVehicleCabin => self.in_vehicle_cabin,
            Mount::VehicleRoof => self.vehicle_roof,
        }
    }

    fn zero() -> Self {
        Self {
            handheld: 0.0,
            in_vehicle_cabin: 0.0,
            vehicle_roof: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRadio {
    /// Reference-signal EIRP of the serving site.
    pub budget: LinkBudget,
    pub pathloss: PathLossParams,
    pub grant: GrantPolicy,
    pub bler: BlockErrorModel,
    /// Link-adaptation back-off added to every block's decode margin, dB.
    pub la_margin_db: f64,
    pub fading: FadingSigmas,
    /// Measurement noise on RSRP samples, dB.
    pub rsrp_noise_db: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct D2dRadio {
    pub budget: LinkBudget,
    pub pathloss: PathLossParams,
    pub rates: D2dRateTable,
    pub bler: BlockErrorModel,
    pub la_margin_db: f64,
    pub fading: FadingSigmas,
    /// Measurement noise on RSSI samples, dB.
    pub rssi_noise_db: f64,
}

/// Building the source (and relay) start inside; the cellular link pays
/// `wall_loss` plus a per-meter depth term while a node is indoors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndoorEnv {
    pub entrance: Position,
    pub wall_loss: f64,
}

/// Pedestrians crossing the D2D path: Poisson bursts of extra attenuation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossings {
    pub rate_per_s: f64,
    pub depth_db: f64,
    pub duration_s: f64,
}

/// Relay stop at a traffic light: the relay trace holds still at the
/// position it has at `at_t` for `dwell_s * (1 + u * spread)`, u uniform
/// in [-1, 1] per seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrafficLight {
    pub at_t: f64,
    pub dwell_s: f64,
    pub spread: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub tti_s: f64,
    /// Simulated-time cap after which a run is reported incomplete.
    pub cap_s: f64,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            tti_s: 0.001,
            cap_s: 1800.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    pub description: String,
    pub nodes: Vec<NodeSpec>,
    pub obstacles: Vec<Obstacle>,
    #[serde(default)]
    pub indoor: Option<IndoorEnv>,
    #[serde(default)]
    pub crossings: Option<Crossings>,
    #[serde(default)]
    pub traffic_light: Option<TrafficLight>,
    /// In CC mode the source stays at its first position.
    #[serde(default)]
    pub static_cc: bool,
    pub cell: CellRadio,
    pub d2d: D2dRadio,
    pub transfer: TransferParams,
    pub d2d_scheduler: D2dSchedulerParams,
    pub cell_scheduler: CellSchedulerParams,
    pub sim: SimParams,
}

impl Scenario {
    fn node(&self, role: Role) -> Option<&NodeSpec> {
        self.nodes.iter().find(|n| n.role == role)
    }

    pub fn base_station(&self) -> &NodeSpec {
        self.node(Role::BaseStation).expect("validated scenario has a base station")
    }

    pub fn source(&self) -> &NodeSpec {
        self.node(Role::Source).expect("validated scenario has a source")
    }

    pub fn relay(&self) -> Option<&NodeSpec> {
        self.node(Role::Relay)
    }

    pub fn bs_position(&self) -> Position {
        self.base_station().trace.start()
    }

    /// Every violated invariant, not just the first.
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let count = |r: Role| self.nodes.iter().filter(|n| n.role == r).count();
        if count(Role::BaseStation) != 1 {
            errs.push(format!("expected exactly one base station, found {}", count(Role::BaseStation)));
        }
        if count(Role::Source) != 1 {
            errs.push(format!("expected exactly one source, found {}", count(Role::Source)));
        }
        if count(Role::Relay) > 1 {
            errs.push(format!("at most one relay allowed, found {}", count(Role::Relay)));
        }
        for n in &self.nodes {
            for e in n.trace.validate() {
                errs.push(format!("node {}: {e}", n.id));
            }
            if n.role == Role::BaseStation && n.trace.waypoints.len() != 1 {
                errs.push(format!("base station {} must have a single fixed waypoint", n.id));
            }
        }
        for (i, o) in self.obstacles.iter().enumerate() {
            for e in o.validate() {
                errs.push(format!("obstacle {i}: {e}"));
            }
        }
        for e in self.cell.pathloss.validate() {
            errs.push(format!("cell.pathloss: {e}"));
        }
        for e in self.d2d.pathloss.validate() {
            errs.push(format!("d2d.pathloss: {e}"));
        }
        for e in self.cell.grant.validate() {
            errs.push(format!("cell.grant: {e}"));
        }
        let table = TbsTable::standard();
        if self.cell.grant.n_prb > table.max_prb() {
            errs.push(format!(
                "cell.grant.n_prb {} exceeds the shipped table ({} PRB)",
                self.cell.grant.n_prb,
                table.max_prb()
            ));
        }
        if let Err(e) = table.validate() {
            errs.push(e.to_string());
        }
        for e in self.d2d.rates.validate() {
            errs.push(format!("d2d.rates: {e}"));
        }
        for (name, m) in [("cell.bler", &self.cell.bler), ("d2d.bler", &self.d2d.bler)] {
            if !(m.k > 0.0) {
                errs.push(format!("{name}.k must be positive"));
            }
        }
        for (name, f) in [("cell.fading", &self.cell.fading), ("d2d.fading", &self.d2d.fading)] {
            if !(f.handheld >= 0.0 && f.in_vehicle_cabin >= 0.0 && f.vehicle_roof >= 0.0) {
                errs.push(format!("{name} sigmas must be >= 0"));
            }
        }
        if !(self.cell.rsrp_noise_db >= 0.0) || !(self.d2d.rssi_noise_db >= 0.0) {
            errs.push("measurement noise must be >= 0".into());
        }
        if let Some(env) = &self.indoor {
            if !(env.wall_loss >= 0.0) || !env.entrance.is_finite() {
                errs.push("indoor environment needs a finite entrance and wall_loss >= 0".into());
            }
            if self.source().trace.indoor_until.is_none() {
                errs.push("indoor scenario but the source never starts indoors".into());
            }
        }
        if let Some(c) = &self.crossings {
            if !(c.rate_per_s >= 0.0 && c.depth_db >= 0.0 && c.duration_s >= 0.0) {
                errs.push("crossing rate, depth and duration must be >= 0".into());
            }
        }
        if let Some(tl) = &self.traffic_light {
            if !(tl.dwell_s >= 0.0) {
                errs.push(format!("traffic light dwell must be >= 0, got {}", tl.dwell_s));
            }
            if !(0.0..=1.0).contains(&tl.spread) {
                errs.push(format!("traffic light spread {} outside [0, 1]", tl.spread));
            }
            if !(tl.at_t >= 0.0) {
                errs.push("traffic light time must be >= 0".into());
            }
            if self.relay().is_none() {
                errs.push("traffic light needs a relay node".into());
            }
        }
        errs.extend(self.transfer.validate());
        errs.extend(self.d2d_scheduler.validate());
        errs.extend(self.cell_scheduler.validate());
        if !(self.sim.tti_s > 0.0) || !(self.sim.cap_s > 0.0) {
            errs.push("tti_s and cap_s must be positive".into());
        }
        errs
    }
}

pub fn validate(scenario: &Scenario) -> Result<()> {
    let errs = scenario.validate();
    if errs.is_empty() {
        Ok(())
    } else {
        Err(SimError::Validation(errs))
    }
}

/// One `key = value` override. Values are JSON when they parse as JSON and
/// plain strings otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Override {
    pub key: String,
    pub value: Value,
}

impl fmt::Display for Override {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.key, self.value)
    }
}

impl Override {
    pub fn new(key: &str, value: Value) -> Self {
        Self {
            key: key.to_string(),
            value,
        }
    }

    pub fn parse_line(line: &str) -> Option<Result<Self, String>> {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            return None;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Some(Err(format!("expected `key = value`, got `{line}`")));
        };
        let key = k.trim();
        if key.is_empty() {
            return Some(Err("empty key".into()));
        }
        let raw = v.trim();
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        Some(Ok(Self::new(key, value)))
    }
}

/// Parses an override file; errors carry 1-based line numbers.
pub fn parse_overrides(text: &str) -> Result<Vec<Override>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        match Override::parse_line(line) {
            None => {}
            Some(Ok(o)) => out.push(o),
            Some(Err(msg)) => return Err(SimError::Parse { line: i + 1, msg }),
        }
    }
    Ok(out)
}

/// Replaces the field at each dotted path (array elements by index).
pub fn apply_overrides(scenario: &Scenario, overrides: &[Override]) -> Result<Scenario> {
    let mut doc = serde_json::to_value(scenario).map_err(|e| SimError::Override {
        key: String::new(),
        msg: e.to_string(),
    })?;
    for o in overrides {
        let err = |msg: String| SimError::Override {
            key: o.key.clone(),
            msg,
        };
        let mut cur = &mut doc;
        for part in o.key.split('.') {
            cur = match cur {
                Value::Object(map) => map
                    .get_mut(part)
                    .ok_or_else(|| err(format!("no field `{part}`")))?,
                Value::Array(items) => {
                    let idx: usize = part
                        .parse()
                        .map_err(|_| err(format!("`{part}` is not an array index")))?;
                    let len = items.len();
                    items
                        .get_mut(idx)
                        .ok_or_else(|| err(format!("index {idx} out of range (len {len})")))?
                }
                // optional sections that are currently absent
                Value::Null => return Err(err(format!("`{part}` is inside an unset section"))),
                _ => return Err(err(format!("cannot descend into `{part}`"))),
            };
        }
        *cur = o.value.clone();
    }
    serde_json::from_value(doc).map_err(|e| SimError::Override {
        key: overrides.iter().map(|o| o.key.as_str()).collect::<Vec<_>>().join(","),
        msg: e.to_string(),
    })
}

/// Built-in scenario `id` with `overrides` merged over it, validated.
pub fn build(id: &str, overrides: &[Override]) -> Result<Scenario> {
    let base = builtin(id)?;
    let s = if overrides.is_empty() {
        base
    } else {
        apply_overrides(&base, overrides)?
    };
    validate(&s)?;
    Ok(s)
}

/// `(id, one-line provenance)` for every built-in scenario.
pub fn list() -> Vec<(&'static str, String)> {
    SCENARIO_IDS
        .iter()
        .map(|&id| (id, builtin(id).map(|s| s.description).unwrap_or_default()))
        .collect()
}

pub fn builtin(id: &str) -> Result<Scenario> {
    match id {
        "outdoor_640" => Ok(outdoor(
            id,
            640.0,
            site_eirp(OUTDOOR_640_SITE),
            "pedestrian SN behind a building 640 m from the BS, 50 m from the corner; RN 25 m ahead",
        )),
        "outdoor_280" => Ok(outdoor(
            id,
            280.0,
            site_eirp(OUTDOOR_280_SITE),
            "second outdoor site: SN behind a building 280 m from the BS, same corner layout",
        )),
        "umh1" => Ok(indoor(
            id,
            650.0,
            site_eirp(UMH1_SITE),
            "indoor-to-outdoor, university building 1: entrance 650 m from the BS; RN 20 m ahead",
        )),
        "umh2" => Ok(indoor(
            id,
            240.0,
            site_eirp(UMH2_SITE),
            "indoor-to-outdoor, university building 2: entrance 240 m from the BS; RN 20 m ahead",
        )),
        "sc" => Ok(indoor(
            id,
            500.0,
            site_eirp(SC_SITE),
            "indoor-to-outdoor, shopping center: entrance 500 m from the BS; RN 20 m ahead",
        )),
        "veh_los" => Ok(veh_los()),
        "veh_nlos" => Ok(veh_nlos()),
        "perfect_link" => Ok(perfect_link()),
        "always_nlos" => Ok(always_nlos()),
        other => Err(SimError::UnknownScenario(other.to_string())),
    }
}

// ---------------------------------------------------------------------------
// Shipped calibration. Fixed once for every scenario; only the serving-site
// anchor differs between sites, since each trial used a different BS.

pub const N_PRB: u32 = 25;
pub const GRANT_ANCHOR_DBM: f64 = -80.0;
pub const GRANT_ANCHOR_ITBS: u8 = 18;
/// dB per I_TBS step above and below the anchor.
pub const GRANT_STEP_ABOVE: f64 = 1.0;
pub const GRANT_STEP_BELOW: f64 = 1.0;

/// Mean LOS RSRP (dBm) each serving site is pinned to, at a distance (m)
/// from its BS. The site EIRP follows from the shared path-loss model.
pub type SiteAnchor = (f64, f64);

pub const OUTDOOR_640_SITE: SiteAnchor = (-70.0, 640.0);
pub const OUTDOOR_280_SITE: SiteAnchor = (-60.0, 280.0);
pub const UMH1_SITE: SiteAnchor = (-68.0, 650.0);
pub const UMH2_SITE: SiteAnchor = (-64.0, 240.0);
pub const SC_SITE: SiteAnchor = (-72.0, 500.0);
/// OppCC waits ~200 s of walking from 440 m before RSRP reaches -80.
pub const VEH_LOS_SITE: SiteAnchor = (-80.0, 160.0);
pub const VEH_NLOS_SITE: SiteAnchor = (-70.0, 440.0);

pub fn site_eirp((rsrp_dbm, distance): SiteAnchor) -> f64 {
    let pl = cell_pathloss();
    rsrp_dbm + pl.pl0 + 10.0 * pl.exponent_los * (distance / pl.d0).log10()
}

pub fn cell_pathloss() -> PathLossParams {
    PathLossParams {
        pl0: 37.5,
        d0: 1.0,
        exponent_los: 2.5,
        exponent_nlos: 3.0,
        shadowing_sigma: 3.0,
        correlation_length: 10.0,
        corner_loss: 10.0,
        vehicle_cabin_loss: 8.0,
        indoor_depth_loss: 0.5,
    }
}

pub fn cell_radio(eirp_dbm: f64) -> CellRadio {
    CellRadio {
        budget: LinkBudget {
            tx_power_dbm: eirp_dbm,
            gains_db: 0.0,
        },
        pathloss: cell_pathloss(),
        grant: GrantPolicy::piecewise_linear(
            GRANT_ANCHOR_DBM,
            GRANT_ANCHOR_ITBS,
            GRANT_STEP_ABOVE,
            GRANT_STEP_BELOW,
            N_PRB,
        ),
        bler: BlockErrorModel::default(),
        la_margin_db: 2.0,
        fading: FadingSigmas {
            handheld: 2.0,
            in_vehicle_cabin: 6.0,
            vehicle_roof: 2.0,
        },
        rsrp_noise_db: 1.0,
    }
}

/// 2.4 GHz for the outdoor and vehicular sites, 5 GHz indoors.
pub fn d2d_radio(five_ghz: bool) -> D2dRadio {
    D2dRadio {
        budget: LinkBudget {
            tx_power_dbm: 15.0,
            gains_db: 0.0,
        },
        pathloss: PathLossParams {
            pl0: if five_ghz { 46.4 } else { 40.0 },
            d0: 1.0,
            exponent_los: 2.3,
            exponent_nlos: 3.0,
            shadowing_sigma: 3.0,
            correlation_length: 10.0,
            corner_loss: 15.0,
            vehicle_cabin_loss: 8.0,
            indoor_depth_loss: 0.0,
        },
        rates: D2dRateTable::default(),
        bler: BlockErrorModel::default(),
        la_margin_db: 1.0,
        fading: FadingSigmas {
            handheld: 3.0,
            in_vehicle_cabin: 3.0,
            vehicle_roof: 3.0,
        },
        rssi_noise_db: 2.0,
    }
}

fn base(id: &str, description: &str, cell: CellRadio, d2d: D2dRadio) -> Scenario {
    Scenario {
        id: id.to_string(),
        description: description.to_string(),
        nodes: Vec::new(),
        obstacles: Vec::new(),
        indoor: None,
        crossings: None,
        traffic_light: None,
        static_cc: false,
        cell,
        d2d,
        transfer: TransferParams::default(),
        d2d_scheduler: D2dSchedulerParams::default(),
        cell_scheduler: CellSchedulerParams::default(),
        sim: SimParams::default(),
    }
}

fn bs_node() -> NodeSpec {
    NodeSpec::new("bs", Role::BaseStation, MobilityTrace::fixed(Position::new(0.0, 0.0)), Mount::Handheld)
}

/// Corner layout: SN and RN walk east along a street 1.5 m north of a
/// building, turn south at the corner and walk towards the BS. The walking
/// line's start is `bs_distance` from the BS and 50 m from the corner.
fn outdoor(id: &str, bs_distance: f64, eirp: f64, description: &str) -> Scenario {
    let to_corner = 50.0;
    let relay_ahead = 25.0;
    let street_x = -7.5 + SIDEWALK_OFFSET;
    let start_x = street_x - to_corner;
    let y = (bs_distance.powi(2) - start_x.powi(2)).sqrt();
    let corner = Position::new(street_x, y);
    let end_y = 60.0;

    let sn = MobilityTrace::constant_speed(
        0.0,
        &[Position::new(start_x, y), corner, Position::new(street_x, end_y)],
        PEDESTRIAN_SPEED,
    );
    let rn = MobilityTrace::constant_speed(
        0.0,
        &[
            Position::new(start_x + relay_ahead, y),
            corner,
            Position::new(street_x, end_y - relay_ahead),
        ],
        PEDESTRIAN_SPEED,
    );
    let depth = (y - 30.0).min(300.0);
    let building = Obstacle::from_corners(
        Position::new(-400.0, y - depth),
        Position::new(-7.5, y - SIDEWALK_OFFSET),
        5.0,
    );
    let mut s = base(id, description, cell_radio(eirp), d2d_radio(false));
    s.nodes = vec![
        bs_node(),
        NodeSpec::new("sn", Role::Source, sn, Mount::Handheld),
        NodeSpec::new("rn", Role::Relay, rn, Mount::Handheld),
    ];
    s.obstacles = vec![building];
    s
}

/// SN starts `INDOOR_DEPTH` m inside, walks straight out of the entrance
/// (which faces the BS) and stops 40 m outside; the RN walks 20 m ahead.
fn indoor(id: &str, entrance_distance: f64, eirp: f64, description: &str) -> Scenario {
    let gap = 20.0;
    let outside = 40.0;
    let e = entrance_distance;
    let mut sn = MobilityTrace::constant_speed(
        0.0,
        &[Position::new(e + INDOOR_DEPTH, 0.0), Position::new(e - outside, 0.0)],
        PEDESTRIAN_SPEED,
    );
    sn.indoor_until = Some(INDOOR_DEPTH / PEDESTRIAN_SPEED);
    let mut rn = MobilityTrace::constant_speed(
        0.0,
        &[
            Position::new(e + INDOOR_DEPTH - gap, 0.0),
            Position::new(e - outside - gap, 0.0),
        ],
        PEDESTRIAN_SPEED,
    );
    rn.indoor_until = Some((INDOOR_DEPTH - gap) / PEDESTRIAN_SPEED);

    let mut s = base(id, description, cell_radio(eirp), d2d_radio(true));
    s.nodes = vec![
        bs_node(),
        NodeSpec::new("sn", Role::Source, sn, Mount::Handheld),
        NodeSpec::new("rn", Role::Relay, rn, Mount::Handheld),
    ];
    s.indoor = Some(IndoorEnv {
        entrance: Position::new(e, 0.0),
        wall_loss: 10.0,
    });
    s.crossings = Some(Crossings {
        rate_per_s: 0.2,
        depth_db: 10.0,
        duration_s: 0.5,
    });
    s
}

/// Sidewalk 10 m north of a straight road to the BS. The car stops at a
/// traffic light placed so the walking SN passes it halfway through the
/// nominal dwell, at 10 m.
fn veh_los() -> Scenario {
    let lateral = 10.0;
    let dwell = 20.0;
    let sn_x0 = (440.0f64.powi(2) - lateral * lateral).sqrt();
    let k = PEDESTRIAN_SPEED / VEHICLE_SPEED;
    // x_stop = sn_x0 - v_p (t_a + dwell / 2),  t_a = (600 - x_stop) / v_c
    let stop_x = (sn_x0 - PEDESTRIAN_SPEED * dwell / 2.0 - 600.0 * k) / (1.0 - k);
    let arrive = (600.0 - stop_x) / VEHICLE_SPEED;
    let park_x = 45.0;

    let sn = MobilityTrace::constant_speed(
        0.0,
        &[Position::new(sn_x0, lateral), Position::new(park_x + 10.0, lateral)],
        PEDESTRIAN_SPEED,
    );
    let rn = MobilityTrace::new(vec![
        Waypoint::new(0.0, 600.0, 0.0),
        Waypoint::new(arrive, stop_x, 0.0),
        Waypoint::new(arrive + (stop_x - park_x) / VEHICLE_SPEED, park_x, 0.0),
    ]);
    let mut s = base(
        "veh_los",
        "vehicular LOS: pedestrian SN 440 m from the BS; car (RN in the cabin) from 600 m, stops ~10 m from the SN",
        cell_radio(site_eirp(VEH_LOS_SITE)),
        d2d_radio(false),
    );
    s.nodes = vec![
        bs_node(),
        NodeSpec::new("sn", Role::Source, sn, Mount::Handheld),
        NodeSpec::new("rn", Role::Relay, rn, Mount::InVehicleCabin),
    ];
    s.traffic_light = Some(TrafficLight {
        at_t: arrive,
        dwell_s: dwell,
        spread: 0.5,
    });
    s
}

/// SN walks west along a street 1.5 m north of a building, turns south at
/// the intersection and walks to the BS. The car starts 140 m east of the
/// SN on the road 4 m further north, drives to the SN's first position and
/// then trails along the same route at `FOLLOW_SPEED`.
fn veh_nlos() -> Scenario {
    let lane = 4.0;
    let face_x = 11.5;
    // the car turns between the sidewalk and the building face
    let street_x = 6.0;
    let sn_x0 = street_x + VEH_NLOS_WALK;
    let y = (440.0f64.powi(2) - sn_x0.powi(2)).sqrt();
    let end_y = 60.0;
    let sn = MobilityTrace::constant_speed(
        0.0,
        &[Position::new(sn_x0, y), Position::new(street_x, y), Position::new(street_x, end_y)],
        PEDESTRIAN_SPEED,
    );
    let car_x = street_x + lane;
    let car_y = y + lane;
    let car_start = Position::new(sn_x0 + 140.0, car_y);
    let car_at_sn = Position::new(sn_x0, car_y);
    let reach = car_start.distance(&car_at_sn) / VEHICLE_SPEED;
    let follow = MobilityTrace::constant_speed(
        reach,
        &[car_at_sn, Position::new(car_x, car_y), Position::new(car_x, end_y - 20.0)],
        FOLLOW_SPEED,
    );
    let mut waypoints = vec![Waypoint {
        t: 0.0,
        pos: car_start,
    }];
    waypoints.extend(follow.waypoints);
    let rn = MobilityTrace::new(waypoints);

    let building = Obstacle::from_corners(
        Position::new(face_x, y - 150.0),
        Position::new(sn_x0 + 15.0, y - SIDEWALK_OFFSET),
        5.0,
    );
    let mut s = base(
        "veh_nlos",
        "vehicular NLOS: pedestrian SN 440 m from the BS behind a building; roof-mounted RN starts 140 m away",
        cell_radio(site_eirp(VEH_NLOS_SITE)),
        d2d_radio(false),
    );
    s.nodes = vec![
        bs_node(),
        NodeSpec::new("sn", Role::Source, sn, Mount::Handheld),
        NodeSpec::new("rn", Role::Relay, rn, Mount::VehicleRoof),
    ];
    s.obstacles = vec![building];
    s
}

/// Static nodes at exactly the reference distance from the BS, no
/// obstacles, no shadowing or fading.
fn perfect_link() -> Scenario {
    let mut cell = cell_radio(site_eirp(OUTDOOR_640_SITE));
    cell.pathloss.shadowing_sigma = 0.0;
    cell.fading = FadingSigmas::zero();
    cell.rsrp_noise_db = 0.0;
    let mut d2d = d2d_radio(false);
    d2d.pathloss.shadowing_sigma = 0.0;
    d2d.fading = FadingSigmas::zero();
    d2d.rssi_noise_db = 0.0;
    let d0 = cell.pathloss.d0;
    let mut s = base("perfect_link", "test fixture: co-located nodes, LOS, no randomness", cell, d2d);
    s.nodes = vec![
        bs_node(),
        NodeSpec::new("sn", Role::Source, MobilityTrace::fixed(Position::new(d0, 0.0)), Mount::Handheld),
        NodeSpec::new("rn", Role::Relay, MobilityTrace::fixed(Position::new(0.0, d0)), Mount::Handheld),
    ];
    s
}

/// Static SN and RN behind a building; opportunistic modes never start.
fn always_nlos() -> Scenario {
    // direct links stay usable but the RSRP average never reaches -80 dBm
    let mut cell = cell_radio(site_eirp(OUTDOOR_640_SITE));
    cell.pathloss.shadowing_sigma = 2.0;
    let mut s = base(
        "always_nlos",
        "test fixture: static nodes permanently NLOS to the BS",
        cell,
        d2d_radio(false),
    );
    s.nodes = vec![
        bs_node(),
        NodeSpec::new("sn", Role::Source, MobilityTrace::fixed(Position::new(0.0, 300.0)), Mount::Handheld),
        NodeSpec::new("rn", Role::Relay, MobilityTrace::fixed(Position::new(10.0, 300.0)), Mount::Handheld),
    ];
    s.obstacles = vec![Obstacle::from_corners(
        Position::new(-60.0, 100.0),
        Position::new(60.0, 200.0),
        2.0,
    )];
    s.sim.cap_s = 600.0;
    s
}
