//! The 1 ms TTI loop: mobility, link sampling, scheduler decisions, data
//! movement and reports, in that order every TTI.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::geometry::{MobilityTrace, Mount, Position, Waypoint};
use crate::metrics::spectral_efficiency;
use crate::radio::{block_error, received_power, LinkKind, Shadowing, TbsTable};
use crate::scenarios::Scenario;
use crate::sched::{CellScheduler, D2dScheduler, DecisionLog, Phase, SampleSource};
use crate::transfer::{Delivery, TransferState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "CC")]
    Cc,
    #[serde(rename = "OppCC")]
    OppCc,
    #[serde(rename = "MCN")]
    Mcn,
    #[serde(rename = "OppMCN")]
    OppMcn,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Cc, Mode::OppCc, Mode::Mcn, Mode::OppMcn];

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Cc => "CC",
            Mode::OppCc => "OppCC",
            Mode::Mcn => "MCN",
            Mode::OppMcn => "OppMCN",
        }
    }

    pub fn is_opportunistic(&self) -> bool {
        matches!(self, Mode::OppCc | Mode::OppMcn)
    }

    pub fn uses_relay(&self) -> bool {
        matches!(self, Mode::Mcn | Mode::OppMcn)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '-' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "cc" => Ok(Mode::Cc),
            "oppcc" => Ok(Mode::OppCc),
            "mcn" => Ok(Mode::Mcn),
            "oppmcn" => Ok(Mode::OppMcn),
            _ => Err(SimError::Range(format!("unknown mode `{s}` (CC, OppCC, MCN, OppMCN)"))),
        }
    }
}

/// Per-run metrics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub scenario: String,
    pub mode: Mode,
    pub seed: u64,
    pub completed: bool,
    /// Start to the last packet reaching the end server (the cap if
    /// incomplete).
    pub total_time: f64,
    /// Sum of TTIs with an uplink grant.
    pub cellular_time: f64,
    /// Time the source spent sending to the relay.
    pub d2d_time: f64,
    /// Payload bits correctly received by the BS, duplicates included.
    pub bits_to_bs: u64,
    pub file_bits: u64,
    pub mean_itbs: f64,
    /// bits/s/Hz over `n_prb * 180 kHz`.
    pub spectral_efficiency: f64,
    pub n_prb: u32,
    pub d2d_window: Option<(f64, f64)>,
    pub cellular_window: Option<(f64, f64)>,
    pub cell_blocks: u64,
    pub cell_block_errors: u64,
    pub d2d_packets: u64,
    pub d2d_packet_errors: u64,
    pub distinct_bytes_at_server: u64,
    /// TTIs at which hop-2 distinct bytes exceeded hop-1 distinct bytes.
    pub conservation_violations: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PacketEventKind {
    Sent,
    Delivered,
    Duplicate,
    Lost,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketEvent {
    pub t: f64,
    pub hop: usize,
    pub seq: u32,
    pub event: PacketEventKind,
}

impl fmt::Display for PacketEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ev = match self.event {
            PacketEventKind::Sent => "sent",
            PacketEventKind::Delivered => "delivered",
            PacketEventKind::Duplicate => "duplicate",
            PacketEventKind::Lost => "lost",
        };
        write!(f, "{} {} {} {}", self.t, self.hop, self.seq, ev)
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunLogs {
    pub d2d: DecisionLog,
    pub cell: DecisionLog,
    /// TTI indices in which the source sent at least one D2D packet.
    pub d2d_data_ttis: Vec<u32>,
    /// TTI indices with an uplink grant.
    pub cell_data_ttis: Vec<u32>,
    pub tti_s: f64,
    pub packets: Vec<PacketEvent>,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub packet_trace: bool,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub result: RunResult,
    pub logs: RunLogs,
}

/// Independent random streams of one run.
mod stream {
    pub const SCENARIO: u64 = 0;
    pub const CELL_SHADOWING: u64 = 1;
    pub const CELL_BLOCKS: u64 = 2;
    pub const D2D_SHADOWING: u64 = 3;
    pub const D2D_BLOCKS: u64 = 4;
    pub const MEASUREMENT: u64 = 5;
}

fn rng_stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(id);
    r
}

fn periods(period: f64, tti: f64, what: &str) -> Result<u64> {
    let n = (period / tti).round();
    if n < 1.0 || ((n * tti) - period).abs() > 1e-9 {
        return Err(SimError::Range(format!(
            "{what} period {period}s is not a whole number of {tti}s TTIs"
        )));
    }
    Ok(n as u64)
}

/// Holds the relay still for a per-seed dwell at the traffic light.
fn realize_dwell(trace: &MobilityTrace, at_t: f64, dwell: f64) -> MobilityTrace {
    let stop = trace.position_at(at_t);
    let mut wps: Vec<Waypoint> = trace.waypoints.iter().copied().filter(|w| w.t < at_t).collect();
    wps.push(Waypoint { t: at_t, pos: stop });
    if dwell > 0.0 {
        wps.push(Waypoint {
            t: at_t + dwell,
            pos: stop,
        });
    }
    for w in trace.waypoints.iter().filter(|w| w.t > at_t) {
        wps.push(Waypoint {
            t: w.t + dwell,
            pos: w.pos,
        });
    }
    MobilityTrace {
        waypoints: wps,
        indoor_until: trace.indoor_until,
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    seq: u32,
    remaining: u64,
    corrupted: bool,
}

/// Complete state of one run. Owns its RNG streams and logs.
pub struct World<'a> {
    scenario: &'a Scenario,
    mode: Mode,
    seed: u64,
    opts: RunOptions,
    table: &'static TbsTable,
    tti: u64,
    tti_s: f64,
    max_ttis: u64,
    beacon_every: u64,
    rsrp_every: u64,
    report_every: u64,

    sn_trace: MobilityTrace,
    rn_trace: Option<MobilityTrace>,
    sn_mount: Mount,
    rn_mount: Mount,
    bursts: Vec<(f64, f64)>,
    burst_idx: usize,

    cell_shadow: Shadowing,
    d2d_shadow: Shadowing,
    rng_cell_shadow: ChaCha8Rng,
    rng_cell: ChaCha8Rng,
    rng_d2d_shadow: ChaCha8Rng,
    rng_d2d: ChaCha8Rng,
    rng_meas: ChaCha8Rng,

    d2d_sched: Option<D2dScheduler>,
    cell_sched: Option<CellScheduler>,
    transfer: TransferState,
    segment: Option<Segment>,
    d2d_credit: f64,

    cell_ttis: u64,
    itbs_sum: u64,
    d2d_busy_ttis: u64,
    cell_blocks: u64,
    cell_block_errors: u64,
    d2d_packets: u64,
    d2d_packet_errors: u64,
    conservation_violations: u64,
    completed_at: Option<f64>,
    logs: RunLogs,
}

impl<'a> World<'a> {
    pub fn new(scenario: &'a Scenario, mode: Mode, seed: u64, opts: RunOptions) -> Result<Self> {
        let errs = scenario.validate();
        if !errs.is_empty() {
            return Err(SimError::Validation(errs));
        }
        if mode.uses_relay() && scenario.relay().is_none() {
            return Err(SimError::Validation(vec![format!(
                "mode {mode} needs a relay node in scenario {}",
                scenario.id
            )]));
        }
        let tti_s = scenario.sim.tti_s;
        let mut rng_scn = rng_stream(seed, stream::SCENARIO);

        let src = scenario.source();
        let sn_trace = if mode == Mode::Cc && scenario.static_cc {
            MobilityTrace {
                waypoints: vec![Waypoint {
                    t: 0.0,
                    pos: src.trace.start(),
                }],
                indoor_until: src.trace.indoor_until.map(|_| f64::INFINITY),
            }
        } else {
            src.trace.clone()
        };

        let mut rn_trace = None;
        let mut rn_mount = Mount::Handheld;
        if mode.uses_relay() {
            let rn = scenario.relay().expect("checked above");
            rn_mount = rn.mount;
            let mut tr = rn.trace.clone();
            if let Some(tl) = &scenario.traffic_light {
                let u: f64 = rng_scn.random_range(-1.0..=1.0);
                let dwell = (tl.dwell_s * (1.0 + u * tl.spread)).max(0.0);
                tr = realize_dwell(&tr, tl.at_t, dwell);
            }
            rn_trace = Some(tr);
        }

        let mut bursts = Vec::new();
        if let Some(c) = &scenario.crossings {
            if c.rate_per_s > 0.0 {
                let exp = Exp::new(c.rate_per_s).map_err(|e| SimError::Range(e.to_string()))?;
                let mut t = 0.0;
                loop {
                    t += exp.sample(&mut rng_scn);
                    if t >= scenario.sim.cap_s {
                        break;
                    }
                    bursts.push((t, t + c.duration_s));
                }
            }
        }

        let d2d_sched = (mode == Mode::OppMcn)
            .then(|| D2dScheduler::new_paused(scenario.d2d_scheduler.clone(), 0.0));
        let cell_sched = mode
            .is_opportunistic()
            .then(|| CellScheduler::new(scenario.cell_scheduler.clone(), Phase::Paused));
        let hops = if mode.uses_relay() { 2 } else { 1 };

        Ok(Self {
            scenario,
            mode,
            seed,
            opts,
            table: TbsTable::standard(),
            tti: 0,
            tti_s,
            max_ttis: (scenario.sim.cap_s / tti_s).round() as u64,
            beacon_every: periods(scenario.d2d_scheduler.beacon_interval, tti_s, "beacon")?,
            rsrp_every: periods(scenario.cell_scheduler.rsrp_period, tti_s, "RSRP sampling")?,
            report_every: periods(scenario.transfer.report_period, tti_s, "report")?,
            sn_trace,
            rn_trace,
            sn_mount: src.mount,
            rn_mount,
            bursts,
            burst_idx: 0,
            cell_shadow: Shadowing::from_params(&scenario.cell.pathloss),
            d2d_shadow: Shadowing::from_params(&scenario.d2d.pathloss),
            rng_cell_shadow: rng_stream(seed, stream::CELL_SHADOWING),
            rng_cell: rng_stream(seed, stream::CELL_BLOCKS),
            rng_d2d_shadow: rng_stream(seed, stream::D2D_SHADOWING),
            rng_d2d: rng_stream(seed, stream::D2D_BLOCKS),
            rng_meas: rng_stream(seed, stream::MEASUREMENT),
            d2d_sched,
            cell_sched,
            transfer: TransferState::new(scenario.transfer.clone(), hops),
            segment: None,
            d2d_credit: 0.0,
            cell_ttis: 0,
            itbs_sum: 0,
            d2d_busy_ttis: 0,
            cell_blocks: 0,
            cell_block_errors: 0,
            d2d_packets: 0,
            d2d_packet_errors: 0,
            conservation_violations: 0,
            completed_at: None,
            logs: RunLogs {
                tti_s,
                ..RunLogs::default()
            },
        })
    }

    pub fn now(&self) -> f64 {
        self.tti as f64 * self.tti_s
    }

    pub fn is_done(&self) -> bool {
        self.completed_at.is_some() || self.tti >= self.max_ttis
    }

    pub fn transfer(&self) -> &TransferState {
        &self.transfer
    }

    /// Position of the node carrying the cellular hop at TTI start.
    pub fn cellular_tx_position(&self) -> Position {
        self.cell_trace().position_at(self.now())
    }

    fn cell_trace(&self) -> &MobilityTrace {
        self.rn_trace.as_ref().unwrap_or(&self.sn_trace)
    }

    fn indoor_loss(&self, trace: &MobilityTrace, pos: &Position, t: f64) -> f64 {
        match &self.scenario.indoor {
            Some(env) if trace.is_indoor(t) => {
                env.wall_loss + self.scenario.cell.pathloss.indoor_depth_loss * pos.distance(&env.entrance)
            }
            _ => 0.0,
        }
    }

    fn crossing_loss(&mut self, t: f64) -> f64 {
        let Some(c) = &self.scenario.crossings else {
            return 0.0;
        };
        while self.burst_idx < self.bursts.len() && self.bursts[self.burst_idx].1 <= t {
            self.burst_idx += 1;
        }
        // bursts can overlap; any active one attenuates
        let active = self.bursts[self.burst_idx..]
            .iter()
            .take_while(|b| b.0 <= t)
            .any(|b| t < b.1);
        if active {
            c.depth_db
        } else {
            0.0
        }
    }

    fn normal(rng: &mut ChaCha8Rng, sigma: f64) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        sigma * z
    }

    /// Advances the world by one TTI.
    pub fn step_tti(&mut self) -> Result<()> {
        if self.is_done() {
            return Ok(());
        }
        let s = self.scenario;
        let k = self.tti;
        let t = self.now();
        let t_end = (k + 1) as f64 * self.tti_s;

        // mobility
        let bs = s.bs_position();
        let sn = self.sn_trace.position_at(t);
        let rn = self.rn_trace.as_ref().map(|tr| tr.position_at(t));

        // link sampling
        let (cell_tx, cell_mount) = match rn {
            Some(p) => (p, self.rn_mount),
            None => (sn, self.sn_mount),
        };
        let cell_extra = s.cell.pathloss.mount_loss(cell_mount)
            + self.indoor_loss(self.cell_trace(), &cell_tx, t);
        let rsrp = received_power(
            LinkKind::Cellular,
            &s.cell.budget,
            &s.cell.pathloss,
            &cell_tx,
            &bs,
            &s.obstacles,
            cell_extra,
            &mut self.cell_shadow,
            &mut self.rng_cell_shadow,
        )?;

        let mut rssi = f64::NAN;
        if let (Some(rn), Some(rn_trace)) = (rn, self.rn_trace.as_ref()) {
            let wall = match &s.indoor {
                Some(env) if self.sn_trace.is_indoor(t) != rn_trace.is_indoor(t) => env.wall_loss,
                _ => 0.0,
            };
            let extra = s.d2d.pathloss.mount_loss(self.sn_mount)
                + s.d2d.pathloss.mount_loss(self.rn_mount)
                + wall;
            rssi = received_power(
                LinkKind::D2d,
                &s.d2d.budget,
                &s.d2d.pathloss,
                &sn,
                &rn,
                &s.obstacles,
                extra,
                &mut self.d2d_shadow,
                &mut self.rng_d2d_shadow,
            )? - self.crossing_loss(t);
        }

        if let Some(d2d) = self.d2d_sched.as_mut() {
            if k.is_multiple_of(self.beacon_every) {
                let v = rssi + Self::normal(&mut self.rng_meas, s.d2d.rssi_noise_db);
                if let Some(rec) = d2d.observe(t, v, SampleSource::Beacon)? {
                    self.logs.d2d.push(rec);
                }
            }
        }
        if let Some(cell) = self.cell_sched.as_mut() {
            if !cell.is_transmitting() && k.is_multiple_of(self.rsrp_every) {
                let v = rsrp + Self::normal(&mut self.rng_meas, s.cell.rsrp_noise_db);
                cell.observe_rsrp(v, t)?;
            }
        }

        // scheduler evaluation
        if let Some(d2d) = self.d2d_sched.as_mut() {
            if let Some(rec) = d2d.tick(t) {
                self.logs.d2d.push(rec);
            }
        }
        if let Some(cell) = self.cell_sched.as_mut() {
            if let Some(rec) = cell.evaluate(t) {
                self.logs.cell.push(rec);
            }
        }

        // data movement
        if self.mode.uses_relay() {
            self.move_d2d(k, t, rssi)?;
        }
        self.move_cellular(k, t, rsrp)?;
        if !self.transfer.conservation_holds() {
            self.conservation_violations += 1;
        }

        // reports
        if (k + 1).is_multiple_of(self.report_every) {
            for hop in 0..self.transfer.n_hops() {
                let r = self.transfer.make_report(hop, t_end)?;
                self.transfer.apply_report(&r);
            }
        }

        if self.completed_at.is_none() && self.transfer.is_complete() {
            self.completed_at = Some(t_end);
        }
        self.tti += 1;
        Ok(())
    }

    fn d2d_active(&self) -> bool {
        self.d2d_sched.as_ref().is_none_or(|d| d.is_transmitting())
    }

    fn move_d2d(&mut self, k: u64, t: f64, rssi: f64) -> Result<()> {
        if !self.d2d_active() {
            return Ok(());
        }
        if !self.transfer.has_eligible(0) {
            self.d2d_credit = 0.0;
            return Ok(());
        }
        let s = self.scenario;
        self.d2d_busy_ttis += 1;
        let rates = &s.d2d.rates;
        self.d2d_credit += rates.rate_bps(rssi) * self.tti_s;
        let margin = rssi - rates.sensitivity(rssi) + s.d2d.la_margin_db;
        let sigma = s.d2d.fading.for_mount(self.sn_mount).max(s.d2d.fading.for_mount(self.rn_mount));
        let nominal_bits = s.transfer.packet_payload as f64 * 8.0;
        let mut sent_any = false;
        while self.d2d_credit >= nominal_bits && self.d2d_active() {
            let Some(seq) = self.transfer.next_payload(0, t) else {
                self.d2d_credit = 0.0;
                break;
            };
            sent_any = true;
            self.d2d_credit -= s.transfer.payload_bytes(seq) as f64 * 8.0;
            self.d2d_packets += 1;
            let fade = Self::normal(&mut self.rng_d2d, sigma);
            let err = block_error(margin + fade, &s.d2d.bler, &mut self.rng_d2d);
            if err {
                self.d2d_packet_errors += 1;
            }
            let delivery = self.transfer.on_receive(0, seq, err);
            self.trace_packet(t, 0, seq, delivery);
            if !err {
                if let Some(d2d) = self.d2d_sched.as_mut() {
                    let v = rssi + Self::normal(&mut self.rng_meas, s.d2d.rssi_noise_db);
                    if let Some(rec) = d2d.observe(t, v, SampleSource::DataAck)? {
                        self.logs.d2d.push(rec);
                    }
                }
            }
        }
        if sent_any {
            self.logs.d2d_data_ttis.push(k as u32);
        }
        Ok(())
    }

    fn move_cellular(&mut self, k: u64, t: f64, rsrp: f64) -> Result<()> {
        if !self.cell_sched.as_ref().is_none_or(|c| c.is_transmitting()) {
            return Ok(());
        }
        let s = self.scenario;
        let hop = self.transfer.last_hop();
        let grant = &s.cell.grant;
        let itbs = grant.grant(rsrp);
        let tbs = self.table.bits(itbs, grant.n_prb)? as u64;
        if tbs == 0 {
            return Ok(());
        }
        // buffer-status rule: only full blocks until nothing more can arrive
        let partial = self.segment.map_or(0, |seg| seg.remaining);
        let queued = partial + self.transfer.pending_bits(hop, tbs);
        let wants = queued >= tbs || (queued > 0 && self.transfer.upstream_complete(hop));
        if !wants {
            return Ok(());
        }

        if let Some(cell) = self.cell_sched.as_mut() {
            cell.observe_grant(itbs, t)?;
        }
        self.cell_ttis += 1;
        self.itbs_sum += itbs as u64;
        self.logs.cell_data_ttis.push(k as u32);

        let mount = if self.mode.uses_relay() { self.rn_mount } else { self.sn_mount };
        let fade = Self::normal(&mut self.rng_cell, s.cell.fading.for_mount(mount));
        let margin = rsrp + fade - grant.decode_threshold(itbs) + s.cell.la_margin_db;
        let err = block_error(margin, &s.cell.bler, &mut self.rng_cell);
        self.cell_blocks += 1;
        if err {
            self.cell_block_errors += 1;
        }

        let mut room = tbs;
        while room > 0 {
            let mut seg = match self.segment.take() {
                Some(seg) => seg,
                None => match self.transfer.next_payload(hop, t) {
                    Some(seq) => Segment {
                        seq,
                        remaining: s.transfer.payload_bytes(seq) as u64 * 8,
                        corrupted: false,
                    },
                    None => break,
                },
            };
            let take = room.min(seg.remaining);
            seg.remaining -= take;
            room -= take;
            seg.corrupted |= err;
            if seg.remaining == 0 {
                let delivery = self.transfer.on_receive(hop, seg.seq, seg.corrupted);
                self.trace_packet(t, hop, seg.seq, delivery);
            } else {
                self.segment = Some(seg);
            }
        }
        Ok(())
    }

    fn trace_packet(&mut self, t: f64, hop: usize, seq: u32, delivery: Delivery) {
        if !self.opts.packet_trace {
            return;
        }
        let event = match delivery {
            Delivery::New => PacketEventKind::Delivered,
            Delivery::Duplicate => PacketEventKind::Duplicate,
            Delivery::Lost => PacketEventKind::Lost,
        };
        self.logs.packets.push(PacketEvent {
            t,
            hop,
            seq,
            event: PacketEventKind::Sent,
        });
        self.logs.packets.push(PacketEvent { t, hop, seq, event });
    }

    pub fn finish(self) -> Result<RunOutput> {
        let s = self.scenario;
        let hop = self.transfer.last_hop();
        let n_prb = s.cell.grant.n_prb;
        let cellular_time = self.cell_ttis as f64 * self.tti_s;
        let bits_to_bs = self.transfer.delivered_bytes(hop) * 8;
        let window = |ttis: &[u32]| match (ttis.first(), ttis.last()) {
            (Some(&a), Some(&b)) => Some((a as f64 * self.tti_s, (b + 1) as f64 * self.tti_s)),
            _ => None,
        };
        let result = RunResult {
            scenario: s.id.clone(),
            mode: self.mode,
            seed: self.seed,
            completed: self.completed_at.is_some(),
            total_time: self.completed_at.unwrap_or(self.tti as f64 * self.tti_s),
            cellular_time,
            d2d_time: self.d2d_busy_ttis as f64 * self.tti_s,
            bits_to_bs,
            file_bits: s.transfer.file_bytes * 8,
            mean_itbs: if self.cell_ttis > 0 {
                self.itbs_sum as f64 / self.cell_ttis as f64
            } else {
                0.0
            },
            spectral_efficiency: spectral_efficiency(bits_to_bs as f64, cellular_time, n_prb)?,
            n_prb,
            d2d_window: window(&self.logs.d2d_data_ttis),
            cellular_window: window(&self.logs.cell_data_ttis),
            cell_blocks: self.cell_blocks,
            cell_block_errors: self.cell_block_errors,
            d2d_packets: self.d2d_packets,
            d2d_packet_errors: self.d2d_packet_errors,
            distinct_bytes_at_server: self.transfer.distinct_received_bytes(hop),
            conservation_violations: self.conservation_violations,
        };
        Ok(RunOutput {
            result,
            logs: self.logs,
        })
    }
}

/// Runs `mode` on `scenario` until the file is delivered or the cap is hit.
pub fn run(scenario: &Scenario, mode: Mode, seed: u64) -> Result<RunOutput> {
    run_with(scenario, mode, seed, RunOptions::default())
}

pub fn run_with(scenario: &Scenario, mode: Mode, seed: u64, opts: RunOptions) -> Result<RunOutput> {
    let mut world = World::new(scenario, mode, seed, opts)?;
    while !world.is_done() {
        world.step_tti()?;
    }
    world.finish()
}
