//! Lists the built-in scenarios, then merges an override file over one of
//! them and shows what validation rejects.
//!
//! cargo run --example scenario_overrides

use oppmcn::scenarios::{build, list, parse_overrides};

const OVERRIDES: &str = "
# longer file, slower walk
transfer.file_bytes = 10000000
cell.grant.n_prb = 17
cell_scheduler.rsrp_thr = -85
";

fn main() -> oppmcn::Result<()> {
    for (id, desc) in list() {
        println!("{id:<14} {desc}");
    }

    let overrides = parse_overrides(OVERRIDES)?;
    let s = build("outdoor_640", &overrides)?;
    println!(
        "\noutdoor_640 with overrides: {} bytes, {} PRB, rsrp_thr {} dBm",
        s.transfer.file_bytes, s.cell.grant.n_prb, s.cell_scheduler.rsrp_thr
    );

    for bad in ["cell.grant.n_prb = 0", "d2d_scheduler.nb_rx = 0", "no.such.key = 1", "transfer.file_bytes"] {
        match parse_overrides(bad).and_then(|o| build("outdoor_640", &o)) {
            Ok(_) => println!("accepted: {bad}"),
            Err(e) => println!("rejected: {bad}\n  {e}"),
        }
    }
    Ok(())
}
