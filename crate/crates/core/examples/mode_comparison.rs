//! All four modes on one scenario, aggregated over seeds into the summary
//! table with gains against CC.
//!
//! cargo run --release --example mode_comparison -- [scenario] [seeds]

use oppmcn::metrics::aggregate;
use oppmcn::report::format_table;
use oppmcn::scenarios::builtin;
use oppmcn::{run, Mode};
use rayon::prelude::*;

fn main() -> oppmcn::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let id = args.first().map_or("veh_nlos", String::as_str);
    let seeds: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(10);

    let scenario = builtin(id)?;
    let jobs: Vec<(Mode, u64)> = Mode::ALL
        .iter()
        .flat_map(|&m| (0..seeds).map(move |s| (m, s)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(m, s)| run(&scenario, m, s).map(|o| o.result))
        .collect::<oppmcn::Result<Vec<_>>>()?;
    print!("{}", format_table(&aggregate(&results)?));
    Ok(())
}
