//! Drives both pause/resume state machines from a hand-written trace and
//! prints the decision log, with an `observe` line after every sample.
//!
//! cargo run --example scheduler_replay -- [trace-file]

use oppmcn::replay::{parse_trace, replay, ReplayConfig};
use oppmcn::sched::Phase;

fn synthetic() -> String {
    let mut lines: Vec<(f64, String)> = Vec::new();
    // D2D: good, then a fade below -70 dBm, then recovery
    for i in 0..60 {
        let t = i as f64 * 0.05;
        let rssi = if (1.0..2.0).contains(&t) { -78.0 } else { -62.0 };
        lines.push((t, format!("{t:.2} d2d_rssi {rssi} data_ack")));
    }
    // cellular: RSRP every 5 ms while paused, crossing -80 dBm at 0.5 s
    for i in 0..400 {
        let t = 0.0025 + i as f64 * 0.005;
        lines.push((t, format!("{t:.4} cell_rsrp {:.1} reference_signal", -84.0 + 8.0 * t)));
    }
    lines.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut text = String::from("# t kind value source\n");
    for (_, l) in lines {
        text += &l;
        text.push('\n');
    }
    text
}

fn main() -> oppmcn::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => synthetic(),
    };
    let samples = parse_trace(&text)?;
    let cfg = ReplayConfig {
        d2d_initial: Phase::Active,
        ..ReplayConfig::default()
    };
    let out = replay(&samples, &cfg)?;
    for r in &out.records {
        println!("{r}");
    }
    eprintln!("{} samples, {} dropped grants", samples.len(), out.dropped_grants);
    Ok(())
}
