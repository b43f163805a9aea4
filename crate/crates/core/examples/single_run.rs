//! One run of one mode, printed field by field.
//!
//! cargo run --release --example single_run -- [scenario] [mode] [seed]

use oppmcn::scenarios::builtin;
use oppmcn::{run, Mode};

fn main() -> oppmcn::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let id = args.first().map_or("outdoor_640", String::as_str);
    let mode: Mode = args.get(1).map_or("OppMCN", String::as_str).parse()?;
    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0);

    let scenario = builtin(id)?;
    let r = run(&scenario, mode, seed)?.result;
    println!("{} / {} / seed {}", r.scenario, r.mode, r.seed);
    println!("completed        {}", r.completed);
    println!("total time       {:.3} s", r.total_time);
    println!("cellular time    {:.3} s", r.cellular_time);
    println!("d2d time         {:.3} s", r.d2d_time);
    println!("bits to BS       {} (file {})", r.bits_to_bs, r.file_bits);
    println!("mean I_TBS       {:.2}", r.mean_itbs);
    println!("efficiency       {:.3} bits/s/Hz over {} PRB", r.spectral_efficiency, r.n_prb);
    println!(
        "cellular BLER    {:.1}% of {} blocks",
        100.0 * r.cell_block_errors as f64 / r.cell_blocks.max(1) as f64,
        r.cell_blocks
    );
    if let Some((a, b)) = r.cellular_window {
        println!("cellular window  {a:.3} .. {b:.3} s");
    }
    if let Some((a, b)) = r.d2d_window {
        println!("d2d window       {a:.3} .. {b:.3} s");
    }
    Ok(())
}
