//! Per-hop client/server file transfer with selective reports, timeout
//! retransmission and the relay coupling between hops.
//!
//! Sequence numbers run from 1 to `n_packets`. With two hops, the relay's
//! cellular client may only send packets its D2D server has received.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::sched::TIME_EPS;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferParams {
    pub file_bytes: u64,
    /// Payload bytes per packet.
    pub packet_payload: u32,
    /// Server report period, seconds.
    pub report_period: f64,
    /// Unacknowledged packets older than this are queued for retransmission.
    pub retransmit_timeout: f64,
}

impl Default for TransferParams {
    fn default() -> Self {
        Self {
            file_bytes: 50_000_000,
            packet_payload: 1470,
            report_period: 0.1,
            retransmit_timeout: 0.2,
        }
    }
}

impl TransferParams {
    pub fn n_packets(&self) -> u32 {
        self.file_bytes.div_ceil(self.packet_payload as u64) as u32
    }

    /// Payload bytes of packet `seq`; only the last one may be short.
    pub fn payload_bytes(&self, seq: u32) -> u32 {
        let n = self.n_packets();
        if seq == n {
            (self.file_bytes - (n as u64 - 1) * self.packet_payload as u64) as u32
        } else {
            self.packet_payload
        }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if self.file_bytes == 0 {
            errs.push("file_bytes must be positive".into());
        }
        if self.packet_payload == 0 {
            errs.push("packet_payload must be positive".into());
        }
        if !(self.report_period > 0.0) {
            errs.push("report_period must be positive".into());
        }
        if !(self.retransmit_timeout > 0.0) {
            errs.push("retransmit_timeout must be positive".into());
        }
        if self.file_bytes.div_ceil(self.packet_payload.max(1) as u64) > u32::MAX as u64 {
            errs.push("file needs more than 2^32 packets".into());
        }
        errs
    }
}

/// Index of a hop: `0` is the first hop out of the source.
pub type HopId = usize;

/// What a server did with one arriving packet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Delivery {
    New,
    Duplicate,
    Lost,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub t: f64,
    pub hop: HopId,
    /// Packets correctly received since the previous report.
    pub acked: Vec<u32>,
}

#[derive(Clone, Debug)]
struct Client {
    next_fresh: u32,
    unacked: BTreeMap<u32, f64>,
    retransmit: VecDeque<u32>,
    queued: Vec<bool>,
    acked: Vec<bool>,
    acked_count: u32,
    sent_once: Vec<bool>,
    distinct_sent_bytes: u64,
    transmissions: u64,
}

#[derive(Clone, Debug)]
struct Server {
    received: Vec<bool>,
    received_count: u32,
    distinct_bytes: u64,
    duplicates: u64,
    lost: u64,
    delivered_bytes: u64,
    pending_ack: Vec<u32>,
    last_report: Option<f64>,
}

#[derive(Clone, Debug)]
struct HopState {
    client: Client,
    server: Server,
}

impl HopState {
    fn new(n: u32) -> Self {
        let slots = n as usize + 1;
        Self {
            client: Client {
                next_fresh: 1,
                unacked: BTreeMap::new(),
                retransmit: VecDeque::new(),
                queued: vec![false; slots],
                acked: vec![false; slots],
                acked_count: 0,
                sent_once: vec![false; slots],
                distinct_sent_bytes: 0,
                transmissions: 0,
            },
            server: Server {
                received: vec![false; slots],
                received_count: 0,
                distinct_bytes: 0,
                duplicates: 0,
                lost: 0,
                delivered_bytes: 0,
                pending_ack: Vec::new(),
                last_report: None,
            },
        }
    }
}

/// Bookkeeping of one run's transfer across one or two hops.
#[derive(Clone, Debug)]
pub struct TransferState {
    params: TransferParams,
    n: u32,
    hops: Vec<HopState>,
    relay_buffer: VecDeque<u32>,
}

impl TransferState {
    /// `hops` is 1 for direct cellular upload and 2 for relayed upload.
    pub fn new(params: TransferParams, hops: usize) -> Self {
        assert!(hops == 1 || hops == 2, "one or two hops");
        let n = params.n_packets();
        Self {
            params,
            n,
            hops: (0..hops).map(|_| HopState::new(n)).collect(),
            relay_buffer: VecDeque::new(),
        }
    }

    pub fn params(&self) -> &TransferParams {
        &self.params
    }

    pub fn n_packets(&self) -> u32 {
        self.n
    }

    pub fn n_hops(&self) -> usize {
        self.hops.len()
    }

    pub fn last_hop(&self) -> HopId {
        self.hops.len() - 1
    }

    fn is_relay_fed(&self, hop: HopId) -> bool {
        hop > 0
    }

    pub fn relay_buffer(&self) -> &VecDeque<u32> {
        &self.relay_buffer
    }

    /// Packets the hop's client could send now, without consuming them.
    pub fn has_eligible(&self, hop: HopId) -> bool {
        let c = &self.hops[hop].client;
        if c.retransmit.iter().any(|&s| !c.acked[s as usize]) {
            return true;
        }
        if self.is_relay_fed(hop) {
            !self.relay_buffer.is_empty()
        } else {
            c.next_fresh <= self.n
        }
    }

    /// Payload bits waiting at the hop's client, counting at most
    /// `cap_bits` (enough for buffer-status decisions).
    pub fn pending_bits(&self, hop: HopId, cap_bits: u64) -> u64 {
        let c = &self.hops[hop].client;
        let mut bits = 0u64;
        let mut add = |seq: u32| {
            bits += self.params.payload_bytes(seq) as u64 * 8;
            bits >= cap_bits
        };
        for &s in &c.retransmit {
            if !c.acked[s as usize] && add(s) {
                return bits;
            }
        }
        if self.is_relay_fed(hop) {
            for &s in &self.relay_buffer {
                if add(s) {
                    return bits;
                }
            }
        } else {
            let mut s = c.next_fresh;
            while s <= self.n {
                if add(s) {
                    return bits;
                }
                s += 1;
            }
        }
        bits
    }

    /// True once no new data can reach this hop's client from upstream.
    pub fn upstream_complete(&self, hop: HopId) -> bool {
        hop == 0 || self.hops[hop - 1].server.received_count == self.n
    }

    /// Chooses and marks as sent the next packet: retransmissions first,
    /// then fresh data (from the relay buffer on the second hop).
    pub fn next_payload(&mut self, hop: HopId, now: f64) -> Option<u32> {
        let relay_fed = self.is_relay_fed(hop);
        let seq = {
            let c = &mut self.hops[hop].client;
            let mut pick = None;
            while let Some(s) = c.retransmit.pop_front() {
                c.queued[s as usize] = false;
                if !c.acked[s as usize] {
                    pick = Some(s);
                    break;
                }
            }
            match pick {
                Some(s) => Some(s),
                None if relay_fed => self.relay_buffer.pop_front(),
                None if c.next_fresh <= self.n => {
                    c.next_fresh += 1;
                    Some(c.next_fresh - 1)
                }
                None => None,
            }
        }?;
        let bytes = self.params.payload_bytes(seq) as u64;
        let c = &mut self.hops[hop].client;
        c.unacked.insert(seq, now);
        c.transmissions += 1;
        if !c.sent_once[seq as usize] {
            c.sent_once[seq as usize] = true;
            c.distinct_sent_bytes += bytes;
        }
        Some(seq)
    }

    pub fn on_receive(&mut self, hop: HopId, seq: u32, error: bool) -> Delivery {
        let bytes = self.params.payload_bytes(seq) as u64;
        let forward = hop + 1 < self.hops.len();
        let s = &mut self.hops[hop].server;
        if error {
            s.lost += 1;
            return Delivery::Lost;
        }
        s.delivered_bytes += bytes;
        if s.received[seq as usize] {
            s.duplicates += 1;
            return Delivery::Duplicate;
        }
        s.received[seq as usize] = true;
        s.received_count += 1;
        s.distinct_bytes += bytes;
        s.pending_ack.push(seq);
        if forward {
            self.relay_buffer.push_back(seq);
        }
        Delivery::New
    }

    /// Drains the server's acknowledgements into a report.
    pub fn make_report(&mut self, hop: HopId, now: f64) -> Result<Report> {
        let period = self.params.report_period;
        let s = &mut self.hops[hop].server;
        if let Some(prev) = s.last_report {
            if now < prev + period - TIME_EPS {
                return Err(SimError::Protocol(format!(
                    "report at t={now} comes less than {period}s after the one at t={prev}"
                )));
            }
        }
        s.last_report = Some(now);
        Ok(Report {
            t: now,
            hop,
            acked: std::mem::take(&mut s.pending_ack),
        })
    }

    /// Clears acknowledged packets and queues timed-out ones for
    /// retransmission.
    pub fn apply_report(&mut self, report: &Report) {
        let rto = self.params.retransmit_timeout;
        let c = &mut self.hops[report.hop].client;
        for &seq in &report.acked {
            c.unacked.remove(&seq);
            if !c.acked[seq as usize] {
                c.acked[seq as usize] = true;
                c.acked_count += 1;
            }
        }
        let expired: Vec<u32> = c
            .unacked
            .iter()
            .filter(|(_, &sent)| sent <= report.t - rto + TIME_EPS)
            .map(|(&seq, _)| seq)
            .collect();
        for seq in expired {
            c.unacked.remove(&seq);
            if !c.queued[seq as usize] {
                c.queued[seq as usize] = true;
                c.retransmit.push_back(seq);
            }
        }
    }

    pub fn retransmit_queue(&self, hop: HopId) -> Vec<u32> {
        self.hops[hop].client.retransmit.iter().copied().collect()
    }

    pub fn unacked(&self, hop: HopId) -> Vec<u32> {
        self.hops[hop].client.unacked.keys().copied().collect()
    }

    pub fn received_count(&self, hop: HopId) -> u32 {
        self.hops[hop].server.received_count
    }

    pub fn has_received(&self, hop: HopId, seq: u32) -> bool {
        self.hops[hop].server.received[seq as usize]
    }

    pub fn duplicates(&self, hop: HopId) -> u64 {
        self.hops[hop].server.duplicates
    }

    pub fn lost(&self, hop: HopId) -> u64 {
        self.hops[hop].server.lost
    }

    /// Payload bytes of every correct arrival, duplicates included.
    pub fn delivered_bytes(&self, hop: HopId) -> u64 {
        self.hops[hop].server.delivered_bytes
    }

    pub fn distinct_received_bytes(&self, hop: HopId) -> u64 {
        self.hops[hop].server.distinct_bytes
    }

    pub fn distinct_sent_bytes(&self, hop: HopId) -> u64 {
        self.hops[hop].client.distinct_sent_bytes
    }

    pub fn transmissions(&self, hop: HopId) -> u64 {
        self.hops[hop].client.transmissions
    }

    pub fn acked_count(&self, hop: HopId) -> u32 {
        self.hops[hop].client.acked_count
    }

    /// Second-hop distinct bytes never exceed first-hop distinct arrivals.
    pub fn conservation_holds(&self) -> bool {
        self.hops.len() < 2 || self.distinct_sent_bytes(1) <= self.distinct_received_bytes(0)
    }

    pub fn is_complete(&self) -> bool {
        self.received_count(self.last_hop()) == self.n
    }
}
