//! Runs every mode on the trial scenarios and prints the median figures the
//! shipped calibration is judged by.
//!
//! cargo run --release --example calibration_sweep -- [seeds] [scenario...] [key=value...]

use oppmcn::engine::{run, Mode};
use oppmcn::metrics::aggregate;
use oppmcn::scenarios::{build, Override, TRIAL_SCENARIOS};
use rayon::prelude::*;

fn main() -> oppmcn::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seeds: u64 = args.first().and_then(|a| a.parse().ok()).unwrap_or(10);
    let overrides: Vec<Override> = args
        .iter()
        .filter(|a| a.contains('='))
        .filter_map(|a| Override::parse_line(a).and_then(|r| r.ok()))
        .collect();
    let mut ids: Vec<String> = args
        .iter()
        .skip(1)
        .filter(|a| !a.contains('='))
        .cloned()
        .collect();
    if ids.is_empty() {
        ids = TRIAL_SCENARIOS.iter().map(|s| s.to_string()).collect();
    }

    for id in &ids {
        let scenario = build(id, &overrides)?;
        let jobs: Vec<(Mode, u64)> = Mode::ALL
            .iter()
            .flat_map(|&m| (0..seeds).map(move |s| (m, s)))
            .collect();
        let outs = jobs
            .par_iter()
            .map(|&(m, seed)| run(&scenario, m, seed))
            .collect::<oppmcn::Result<Vec<_>>>()?;
        let results: Vec<_> = outs.iter().map(|o| o.result.clone()).collect();
        println!("{id}");
        for a in aggregate(&results)? {
            let group: Vec<_> = outs.iter().filter(|o| o.result.mode == a.mode).collect();
            let blocks: u64 = group.iter().map(|o| o.result.cell_blocks).sum();
            let errs: u64 = group.iter().map(|o| o.result.cell_block_errors).sum();
            let d2d: u64 = group.iter().map(|o| o.result.d2d_packets).sum();
            let d2d_err: u64 = group.iter().map(|o| o.result.d2d_packet_errors).sum();
            println!(
                "  {:<7} done {:>2}/{:<2} total {:>7.1} cell {:>6.1} d2d {:>6.1} itbs {:>5.1} eff {:>6.3} factor {:>5.2} red {:>5.1}% bler {:>4.1}% d2d-bler {:>4.1}%",
                a.mode.as_str(),
                a.completed,
                a.n_seeds,
                a.total_time.median,
                a.cellular_time.median,
                a.d2d_time.median,
                a.mean_itbs.median,
                a.spectral_efficiency.median,
                a.efficiency_factor.unwrap_or(f64::NAN),
                100.0 * a.cellular_time_reduction.unwrap_or(f64::NAN),
                100.0 * errs as f64 / blocks.max(1) as f64,
                100.0 * d2d_err as f64 / d2d.max(1) as f64,
            );
        }
    }
    Ok(())
}
