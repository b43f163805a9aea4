//! Runs an opportunistic mode, prints its pause/resume transitions and
//! audits them against the TTIs that actually carried data.
//!
//! cargo run --release --example pause_audit -- [scenario] [seed]

use oppmcn::audit::audit;
use oppmcn::scenarios::builtin;
use oppmcn::{run, Mode};

fn main() -> oppmcn::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let id = args.first().map_or("veh_nlos", String::as_str);
    let seed: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let s = builtin(id)?;

    for mode in [Mode::OppCc, Mode::OppMcn] {
        let out = run(&s, mode, seed)?;
        println!("{mode}: {} cellular TTIs, {} D2D TTIs", out.logs.cell_data_ttis.len(), out.logs.d2d_data_ttis.len());
        for r in out.logs.d2d.transitions().chain(out.logs.cell.transitions()) {
            println!("  {r}");
        }
        let report = audit(&out, &s.d2d_scheduler, &s.cell_scheduler);
        if report.is_clean() {
            println!("  audit clean");
        }
        for v in &report.violations {
            println!("  VIOLATION {v}");
        }
    }
    Ok(())
}
