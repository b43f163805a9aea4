//! Writes per-run rows and the per-group summary as CSV, reads them back
//! and prints the margin-of-error footnote.
//!
//! cargo run --release --example csv_report -- [scenario] [seeds]

use oppmcn::metrics::aggregate;
use oppmcn::report::{margin_footnote, read_runs_csv, write_runs_csv, write_summary_csv, RunRow};
use oppmcn::scenarios::builtin;
use oppmcn::{run, Mode};

fn main() -> oppmcn::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let id = args.first().map_or("sc", String::as_str);
    let seeds: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let s = builtin(id)?;

    let mut results = Vec::new();
    for mode in Mode::ALL {
        for seed in 0..seeds {
            results.push(run(&s, mode, seed)?.result);
        }
    }
    let rows: Vec<RunRow> = results.iter().map(RunRow::from).collect();
    let mut buf = Vec::new();
    write_runs_csv(&mut buf, &rows)?;
    assert_eq!(read_runs_csv(buf.as_slice())?, rows);
    print!("{}", String::from_utf8_lossy(&buf));

    let aggs = aggregate(&results)?;
    println!();
    write_summary_csv(std::io::stdout().lock(), &aggs)?;
    println!("\n{}", margin_footnote(&aggs));
    Ok(())
}
