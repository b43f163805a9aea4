//! Mean RSRP, LOS state and granted I_TBS along the source's walk in a
//! scenario, without shadowing or fading.
//!
//! cargo run --example link_budget -- [scenario] [step_s]

use oppmcn::geometry::is_los;
use oppmcn::radio::{mean_received_power, tbs_bits};
use oppmcn::scenarios::builtin;

fn main() -> oppmcn::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let id = args.first().map_or("outdoor_640", String::as_str);
    let step: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(5.0);

    let s = builtin(id)?;
    let bs = s.bs_position();
    let trace = &s.source().trace;
    let grant = &s.cell.grant;
    println!("{:>6} {:>8} {:>4} {:>9} {:>5} {:>6}", "t s", "dist m", "los", "rsrp dBm", "itbs", "tbs");
    let mut t = 0.0;
    while t <= trace.end_time() + 1e-9 {
        let p = trace.position_at(t);
        let los = is_los(&p, &bs, &s.obstacles).los;
        let rsrp = mean_received_power(&s.cell.budget, &s.cell.pathloss, &p, &bs, &s.obstacles, 0.0)?;
        let itbs = grant.grant(rsrp);
        println!(
            "{t:>6.1} {:>8.1} {:>4} {rsrp:>9.1} {itbs:>5} {:>6}",
            p.distance(&bs),
            if los { "yes" } else { "no" },
            tbs_bits(itbs, grant.n_prb)?
        );
        t += step;
    }
    Ok(())
}
